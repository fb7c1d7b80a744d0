#pragma once

#include "qmatch/catalog.hpp"
#include "qmatch/ontology.hpp"

#include <filesystem>
#include <string>

namespace qtest {

inline std::filesystem::path fixture_path(const std::string& relative) {
    return std::filesystem::path(QMATCH_FIXTURE_DIR) / relative;
}

inline const qmatch::Ontology& camera_ontology() {
    static const qmatch::Ontology o =
        qmatch::load_ontology_file(fixture_path("camera/ontology.json"));
    return o;
}

inline const qmatch::Catalog& camera_catalog() {
    static const qmatch::Catalog c =
        qmatch::load_catalog_file(fixture_path("camera/catalog.json"), camera_ontology());
    return c;
}

inline const qmatch::Request& camera_request() {
    static const qmatch::Request r =
        qmatch::load_request_file(fixture_path("camera/request.json"), camera_ontology());
    return r;
}

}  // namespace qtest
