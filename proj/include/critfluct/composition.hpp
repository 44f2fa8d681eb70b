#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "critfluct/septuple.hpp"

namespace critfluct {

// An activation/loss pairing. Catalogued pairings carry the power-law
// exponents k predicted for the two dataset classes; ad-hoc pairings
// (e.g. identity + mean squared in tests) carry none.
struct Composition {
    std::string id;
    Activation activation = Activation::sigmoid;
    Loss loss;
    std::optional<double> k_minus;
    std::optional<double> k_plus;
};

// The five studied pairings, in canonical order:
//   sigmoid_mse      sigmoid        + mean squared        k = 1
//   sigmoid_ce       sigmoid        + cross entropy       k = 1
//   relu_p2          relu           + power 2             k = 0
//   relu_p4          relu           + power 4             k = 2/3
//   piecewise_ce     piecewise_unit + cross entropy       k = 2
// Power-loss entries follow k = (n - 2) / (n - 1).
const std::vector<Composition>& catalogue();

// Lookup by id; unknown ids are config errors.
const Composition& composition_by_id(const std::string& id);

// (k_minus, k_plus) for catalogued pairings, empty otherwise (distinct from an
// error: uncatalogued pairings are legal, they just carry no prediction).
std::optional<std::pair<double, double>> predicted_exponent(const Composition& comp);

// H(f(y) | x2), the loss evaluated through the activation.
double composition_value(double y, const Composition& comp, double x2);

// Large-|y| closed forms for the sigmoid pairings (e^{2y}, e^{-2y}, e^{y},
// e^{-y} depending on loss and class), empty when no such form is catalogued.
// Exposed for tests that pin the tail behavior the exponents derive from.
std::optional<double> asymptotic_composition_value(double y, const Composition& comp, double x2);

// dH/dy and d2H/dy2 through the activation chain.
double composition_grad_y(double y, const Composition& comp, double x2);
double composition_hess_y(double y, const Composition& comp, double x2);

}  // namespace critfluct
