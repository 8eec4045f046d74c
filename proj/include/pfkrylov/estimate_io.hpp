#pragma once

#include <string>

#include "pfkrylov/krylov.hpp"

namespace pfk {

// How an estimate file refers back to its training data: by default it
// stores the CSV path plus the plan needed to re-derive the states; with
// embed_data the states are inlined for portability.
struct EstimateDataRef {
    std::string data_path;
    int delay = 1;
    int train_start = 0;  // first embedded index of the training window
    bool embed_data = false;
};

struct LoadedEstimate {
    OperatorEstimate est;
    int delay = 1;
};

// Self-describing versioned text format; complex matrices are written
// row-major as "re,im" pairs with 17 significant digits.
void save_estimate(const std::string& path, const OperatorEstimate& est,
                   const EstimateDataRef& ref);

LoadedEstimate load_estimate(const std::string& path);

}  // namespace pfk
