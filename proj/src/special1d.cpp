#include "magtrace/special1d.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "magtrace/errors.hpp"
#include "magtrace/quadrature.hpp"
#include "magtrace/tridiag.hpp"

namespace magtrace {

double hermite_phi(int k, double t) {
    if (k < 1) throw precondition_error("hermite_phi: index must be >= 1");
    // Upward recurrence on the orthonormal oscillator eigenfunctions:
    // u_0 = pi^{-1/4} e^{-t^2/2}, u_{j+1} = t sqrt(2/(j+1)) u_j - sqrt(j/(j+1)) u_{j-1}.
    // phi_k = u_{k-1}.
    double u0 = std::pow(M_PI, -0.25) * std::exp(-0.5 * t * t);
    if (k == 1) return u0;
    double u1 = std::sqrt(2.0) * t * u0;
    for (int j = 1; j < k - 1; ++j) {
        double u2 = t * std::sqrt(2.0 / (j + 1)) * u1 - std::sqrt((double)j / (j + 1)) * u0;
        u0 = u1;
        u1 = u2;
    }
    return u1;
}

double hermite_tail_mass(int k, double xi) {
    if (k < 1) throw precondition_error("hermite_tail_mass: index must be >= 1");
    if (xi == 0.0) return 0.5; // phi_k^2 is even
    if (xi < 0.0) return 1.0 - hermite_tail_mass(k, -xi);
    double t_hi = std::max(xi, std::sqrt(2.0 * k + 1.0)) + 12.0;
    if (xi >= t_hi) return 0.0;
    auto f = [k](double t) {
        double p = hermite_phi(k, t);
        return p * p;
    };
    QuadResult q = integrate_gk(f, xi, t_hi, 1e-12);
    return std::clamp(q.value, 0.0, 1.0);
}

ModelGrid ModelGrid::for_problem(double xi, int k_max, double spacing_hint) {
    if (k_max < 1) throw precondition_error("ModelGrid: k_max must be >= 1");
    if (spacing_hint <= 0) throw precondition_error("ModelGrid: spacing_hint must be > 0");
    double turn = std::sqrt(4.0 * k_max + 3.0);
    double wall = std::max(turn + 8.0, 2.0 * turn); // margin-factor rule for large k
    double raw = std::max(0.0, -xi) + wall;
    // round up to the hint lattice so grids with equal hints share t nodes
    long cells = (long)std::ceil(raw / spacing_hint - 1e-12);
    cells = std::max(cells, 65L); // n >= 64
    ModelGrid g;
    g.t_max = cells * spacing_hint;
    g.n = (int)cells - 1;
    return g;
}

void ModelGrid::validate(double xi, int k_max, double margin_factor) const {
    if (n < 64) throw precondition_error("ModelGrid: n must be >= 64");
    if (!(t_max > 0) || !(spacing() > 0)) throw precondition_error("ModelGrid: empty domain");
    double needed = std::max(0.0, -xi) + std::sqrt(4.0 * k_max + 3.0) + 8.0;
    if (t_max < needed - 1e-9)
        throw precondition_error("ModelGrid: t_max " + std::to_string(t_max) +
                                 " shorter than truncation rule " + std::to_string(needed));
    double wall_pot = (xi + t_max) * (xi + t_max);
    if (wall_pot < margin_factor * (4.0 * k_max + 3.0))
        throw precondition_error("ModelGrid: wall potential margin violated");
}

namespace {

void fix_sign(std::vector<double>& psi) {
    double mx = 0.0;
    for (double v : psi) mx = std::max(mx, std::abs(v));
    for (auto it = psi.rbegin(); it != psi.rend(); ++it) {
        if (std::abs(*it) > 1e-10 * mx) {
            if (*it < 0)
                for (double& v : psi) v = -v;
            return;
        }
    }
}

} // namespace

std::vector<ModelEigenpair> model_eigensystem(double xi, int k_max, const ModelGrid& grid,
                                              bool want_vectors) {
    grid.validate(xi, k_max);
    const int n = grid.n;
    const double h = grid.spacing();
    if (k_max > n) throw precondition_error("model_eigensystem: k_max exceeds grid size");

    SymTridiag T;
    T.diag.resize(n);
    T.off.assign(n - 1, -1.0 / (h * h));
    for (int i = 0; i < n; ++i) {
        double t = (i + 1) * h;
        T.diag[i] = 2.0 / (h * h) + (xi + t) * (xi + t);
    }

    std::vector<double> evs = eigenvalues_by_index(T, 1, k_max);
    for (int k = 1; k < (int)evs.size(); ++k)
        if (!(evs[k] > evs[k - 1]))
            throw numeric_error("model_eigensystem: eigenvalues not strictly increasing at k=" +
                                std::to_string(k + 1) + ", xi=" + std::to_string(xi));

    std::vector<ModelEigenpair> out(k_max);
    for (int k = 1; k <= k_max; ++k) {
        ModelEigenpair& p = out[k - 1];
        p.k = k;
        p.xi = xi;
        p.e = evs[k - 1];
        p.err_e = h * h * (std::abs(p.e) + 1.0); // order-of-magnitude, refined solve is sharper
        p.spacing = h;
        if (want_vectors) {
            p.psi = eigenvector(T, p.e);
            double scale = 1.0 / std::sqrt(h); // unit 2-norm -> unit discrete L2 norm
            for (double& v : p.psi) v *= scale;
            fix_sign(p.psi);
            p.dpsi0 = (4.0 * p.psi[0] - p.psi[1]) / (2.0 * h);
        }
    }
    return out;
}

std::vector<ModelEigenpair> model_eigensystem_refined(double xi, int k_max,
                                                      const ModelGrid& grid,
                                                      bool want_vectors) {
    ModelGrid fine{grid.t_max, 2 * grid.n + 1};
    auto coarse_pairs = model_eigensystem(xi, k_max, grid, want_vectors);
    auto fine_pairs = model_eigensystem(xi, k_max, fine, want_vectors);
    for (int i = 0; i < k_max; ++i) {
        ModelEigenpair& f = fine_pairs[i];
        const ModelEigenpair& c = coarse_pairs[i];
        double e_rich = (4.0 * f.e - c.e) / 3.0;
        f.err_e = std::abs(f.e - c.e) / 3.0;
        f.e = e_rich;
        if (want_vectors) f.dpsi0 = (4.0 * f.dpsi0 - c.dpsi0) / 3.0;
    }
    return fine_pairs;
}

std::pair<double, double> hadamard_check(int k, double xi, double dxi, double spacing_hint) {
    if (dxi < 1e-5 || dxi > 1e-2)
        throw precondition_error("hadamard_check: dxi must lie in [1e-5, 1e-2]");
    // Shared t_max across the three solves keeps the finite-difference clean.
    ModelGrid grid = ModelGrid::for_problem(xi - dxi, k, spacing_hint);
    double ep = model_eigensystem_refined(xi + dxi, k, grid, false)[k - 1].e;
    double em = model_eigensystem_refined(xi - dxi, k, grid, false)[k - 1].e;
    double dpsi0 = model_eigensystem_refined(xi, k, grid, true)[k - 1].dpsi0;
    return {(ep - em) / (2.0 * dxi), dpsi0 * dpsi0};
}

bool ModelCache::Key::operator<(const Key& o) const {
    if (xi != o.xi) return xi < o.xi;
    if (k_max != o.k_max) return k_max < o.k_max;
    if (hint != o.hint) return hint < o.hint;
    return vectors < o.vectors;
}

std::shared_ptr<const std::vector<ModelEigenpair>> ModelCache::refined(double xi, int k_max,
                                                                       double spacing_hint,
                                                                       bool want_vectors) {
    Key key{xi, k_max, spacing_hint, want_vectors};
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = entries_.find(key);
        if (it != entries_.end()) return it->second;
        // a vector-bearing solve of the same problem also serves
        if (!want_vectors) {
            auto it2 = entries_.find(Key{xi, k_max, spacing_hint, true});
            if (it2 != entries_.end()) return it2->second;
        }
    }
    auto grid = ModelGrid::for_problem(xi, k_max, spacing_hint);
    auto value = std::make_shared<const std::vector<ModelEigenpair>>(
        model_eigensystem_refined(xi, k_max, grid, want_vectors));
    std::lock_guard<std::mutex> lock(mu_);
    auto [it, inserted] = entries_.emplace(key, value);
    if (!inserted) return it->second;
    return value;
}

std::size_t ModelCache::size() const {
    std::lock_guard<std::mutex> lock(mu_);
    return entries_.size();
}

} // namespace magtrace
