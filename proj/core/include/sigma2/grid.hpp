#pragma once

#include "sigma2/sym_matrix.hpp"

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace sigma2 {

// Scalar samples on a uniform tensor grid over a centered cube.  Values are
// stored lexicographically with the last axis fastest; m is odd so the center
// is a node.
struct GridFunction {
    int n = 0;
    int m = 0;
    double h = 0.0;
    std::vector<double> origin; // coordinate of index (0, ..., 0)
    std::vector<double> values; // m^n entries

    static GridFunction create(int n, int m, double radius);

    std::size_t size() const { return values.size(); }
    double radius() const { return h * (m - 1) / 2.0; }

    std::size_t stride(int axis) const; // last axis has stride 1
    std::size_t flat(std::span<const int> idx) const;
    void unflat(std::size_t flat_idx, std::span<int> idx) const;
    void coord(std::span<const int> idx, std::span<double> x) const;
    std::vector<double> coord(std::span<const int> idx) const;

    double& at(std::span<const int> idx) { return values[flat(idx)]; }
    double at(std::span<const int> idx) const { return values[flat(idx)]; }

    // True when every index component is at least `depth` away from the faces.
    bool is_interior(std::span<const int> idx, int depth = 1) const;

    void validate() const;
};

// Fill a new grid by evaluating f at every node.
GridFunction sample_grid(int n, int m, double radius,
                         const std::function<double(std::span<const double>)>& f);

// Advance a multi-index in lexicographic order; returns false after the last.
bool next_index(std::span<int> idx, int m);

// Text format "SIGMA2GRID v1": header line, one line with n, m, h and the
// origin, then one value per line with 17 significant digits.  Finite values
// round-trip bit-exactly.
void save_grid(const GridFunction& g, std::ostream& os);
void save_grid(const GridFunction& g, const std::string& path);
GridFunction load_grid(std::istream& is);
GridFunction load_grid(const std::string& path);

// Second-order centered differences at an interior node (depth 1).
double laplacian_at(const GridFunction& u, std::size_t f);
void gradient_at(const GridFunction& u, std::size_t f, std::span<double> out);
SymMatrix hessian_at(const GridFunction& u, std::size_t f);

// Mixed third derivative from differencing the Hessian stencil once more,
// needing depth 2.  The axes are sorted internally, so the value is invariant
// under permutations of (i, j, k) by construction.
double third_derivative_at(const GridFunction& u, std::size_t f, int i, int j, int k);

// Flat indices of nodes with |x - center| <= r + inflate, ascending.
std::vector<std::size_t> ball_mask(const GridFunction& g, std::span<const double> center,
                                   double r, double inflate = 0.0);
// Ball centered at the origin.
std::vector<std::size_t> ball_mask(const GridFunction& g, double r, double inflate = 0.0);

// Flat indices of all depth-`depth` interior nodes, ascending.
std::vector<std::size_t> interior_mask(const GridFunction& g, int depth = 1);

} // namespace sigma2
