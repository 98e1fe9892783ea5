#pragma once

#include "freqstore/controllers.hpp"
#include "freqstore/grid_model.hpp"

namespace freqstore {

struct Scenario {
    GridParams grid;
    ControllerConfig controller = NoStorage{};
    Disturbance disturbance;
    SimOptions sim;

    bool operator==(const Scenario&) const = default;
};

void validate(const Scenario& scenario);

}  // namespace freqstore
