#pragma once

#include "nkappa/classify.hpp"

#include <string>

namespace nk {

// Built-in example functions with their documented classification data.
struct CatalogEntry {
    std::string name;
    std::string description;
    FunctionHandle handle;
    std::size_t kappa = 0;
    TheoremForm form = TheoremForm::Form2;
    KappaCase case_label = KappaCase::A;
    ExtReal phi_zero_minus;
};

const std::vector<CatalogEntry>& catalog();
const CatalogEntry* catalog_find(const std::string& name);

} // namespace nk
