#ifndef NLSDECAY_EQUATION_HPP
#define NLSDECAY_EQUATION_HPP

#include <stdexcept>

namespace nlsdecay {

/// Defocusing model  i u_t + Lap u = |u|^(q-1) u  in dimension d.
/// The supported sign is +1 (defocusing) only.  linear = true disables the
/// nonlinear term entirely (free Schroedinger flow).
struct EquationSpec {
    int dimension = 3;
    int power_q = 5;      // q in {3, 5}: cubic or quintic
    bool linear = false;

    /// The studied models are (d,q) = (3,5), (3,3), (2,5); anything else
    /// is an extension combination.
    bool is_headline_model() const {
        return !linear && ((dimension == 3 && (power_q == 5 || power_q == 3)) ||
                           (dimension == 2 && power_q == 5));
    }

    /// |u|^(4/d) u is mass-critical; among integer powers that is
    /// (d,q) = (1,5) and (2,3).
    bool is_mass_critical() const {
        return !linear && power_q - 1 == (dimension == 1 ? 4 : (dimension == 2 ? 2 : -1));
    }

    void validate() const {
        if (dimension < 1 || dimension > 3)
            throw std::invalid_argument("EquationSpec: dimension must be 1, 2 or 3");
        if (!linear && power_q != 3 && power_q != 5)
            throw std::invalid_argument("EquationSpec: nonlinearity power must be 3 or 5");
    }

    /// Space-time Lebesgue exponent of the model's scattering norm:
    /// 10 for (3,5), 5 for (3,3), 8 for (2,5).
    double strichartz_exponent() const {
        if (dimension == 3 && power_q == 5) return 10.0;
        if (dimension == 3 && power_q == 3) return 5.0;
        if (dimension == 2 && power_q == 5) return 8.0;
        return 2.0 * (power_q + 1.0) / 2.0;  // fallback for extensions
    }

    /// Sobolev order tracked for the model: 4 for the cubic model, 3 else.
    double sobolev_order() const { return (power_q == 3) ? 4.0 : 3.0; }
};

}  // namespace nlsdecay

#endif
