#pragma once

#include "sigma2/errors.hpp"

#include <vector>

namespace sigma2 {

// Eigenvalue list of a symmetric matrix, kept sorted in descending order.
class Spectrum {
public:
    explicit Spectrum(std::vector<double> values);

    int n() const { return static_cast<int>(values_.size()); }
    double operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }
    const std::vector<double>& values() const { return values_; }

    double largest() const { return values_.front(); }
    double smallest() const { return values_.back(); }

private:
    std::vector<double> values_;
};

// Positivity certificate for the cone {sigma_1 > 0, sigma_2 > 0}.
struct ConeCertificate {
    double sigma1 = 0.0;
    double sigma2 = 0.0;
    bool in_gamma2 = false;
};

} // namespace sigma2
