#include "rkl/theory.hpp"

#include <cmath>
#include <string>

namespace rkl::theory {

namespace {

using linalg::dot;
using linalg::matvec;
using linalg::norm2;

void check_group_index(const Spectrum& spectrum, int i, const char* where) {
    if (i < 0 || i >= spectrum.group_count()) {
        throw InvalidArgument(std::string(where) + ": group index out of range");
    }
}

void check_no_zero_eigenvalue(const std::vector<double>& vals) {
    double scale = 0.0;
    for (double a : vals) scale = std::max(scale, std::fabs(a));
    for (double a : vals) {
        if (std::fabs(a) <= 1e-12 * std::max(1.0, scale)) {
            throw ZeroEigenvalue("spectrum contains a (numerically) zero eigenvalue");
        }
    }
}

double pair_factor(double a_i, double a_j) {
    return std::fabs(a_j - a_i) / (std::fabs(a_j) + std::fabs(a_i));
}

// splitmix64; used only for the randomized spread coefficients.
std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double uniform_pm1(std::uint64_t& state) {
    return 2.0 * (static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53) - 1.0;
}

// Coefficients c_1..c_m with sum of squares total^2 and c_1 != 0.
std::vector<double> spread_coefficients(int m, double total, std::uint64_t& state) {
    std::vector<double> c(static_cast<std::size_t>(m));
    double ss = 0.0;
    for (auto& x : c) {
        x = uniform_pm1(state);
        ss += x * x;
    }
    if (std::fabs(c[0]) < 0.1 || ss == 0.0) {
        c[0] = 0.5;
        ss = 0.0;
        for (double x : c) ss += x * x;
    }
    const double scale = std::fabs(total) / std::sqrt(ss);
    for (auto& x : c) x *= scale;
    return c;
}

}  // namespace

std::string to_string(Regime r) {
    switch (r) {
        case Regime::SymmetricDefinite: return "SymmetricDefinite";
        case Regime::SymmetricIndefinite: return "SymmetricIndefinite";
        case Regime::SkewM: return "SkewM";
    }
    return "Unknown";
}

std::string to_string(MapKind m) {
    switch (m) {
        case MapKind::I2: return "I2";
        case MapKind::Pi: return "Pi";
        case MapKind::Psi: return "Psi";
        case MapKind::Upsilon: return "Upsilon";
    }
    return "Unknown";
}

FactorReport worst_case_gmres1(const Spectrum& spectrum) {
    std::vector<int> all(static_cast<std::size_t>(spectrum.group_count()));
    for (int i = 0; i < spectrum.group_count(); ++i) all[static_cast<std::size_t>(i)] = i;
    return worst_case_gmres1(spectrum, all);
}

FactorReport worst_case_gmres1(const Spectrum& spectrum, const std::vector<int>& restrict_to) {
    std::vector<double> vals;
    for (int idx : restrict_to) {
        check_group_index(spectrum, idx, "worst_case_gmres1");
        vals.push_back(spectrum.distinct[static_cast<std::size_t>(idx)]);
    }
    if (vals.empty()) throw InvalidArgument("worst_case_gmres1: empty restriction");
    check_no_zero_eigenvalue(vals);

    bool any_pos = false, any_neg = false;
    for (double a : vals) (a > 0.0 ? any_pos : any_neg) = true;

    FactorReport rep;
    rep.regime = (any_pos && any_neg) ? Regime::SymmetricIndefinite : Regime::SymmetricDefinite;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        for (std::size_t j = i + 1; j < vals.size(); ++j) {
            PairFactor p;
            p.i = restrict_to[i];
            p.j = restrict_to[j];
            p.value = pair_factor(vals[i], vals[j]);
            p.eps_sq = std::fabs(vals[i] / vals[j]);
            rep.pairs.push_back(p);
            rep.worst_case_rho = std::max(rep.worst_case_rho, p.value);
        }
    }
    return rep;
}

double lambda_two_mode(double a_i, double a_j, double eps) {
    if (a_i == a_j) throw InvalidArgument("lambda_two_mode: eigenvalues must differ");
    if (eps == 0.0) throw InvalidArgument("lambda_two_mode: eps must be nonzero");
    const double d = a_j - a_i;
    const double t = eps * eps;
    return d * d / ((a_i * a_i + t * a_j * a_j) * (1.0 + 1.0 / t));
}

double rho_for_two_modes(double a_i, double a_j, double eps) {
    return std::sqrt(lambda_two_mode(a_i, a_j, eps));
}

double i2_value(double a_i, double a_j) {
    const double d = a_j - a_i;
    const double s = a_j + a_i;
    return (d * d) / (s * s);
}

double psi_eps_sq(double a_i, double a_j) {
    const double den = (a_i - 1.0) * a_j;
    if (den == 0.0) {
        throw SignConditionViolated("psi_eps_sq: eigenvalue at 1 (or 0) admits no Psi eigenpair");
    }
    return -(a_j - 1.0) * a_i / den;
}

double mu_psi(double a_i, double a_j) {
    // From the component equations: beta = 1/(a_i + a_j - 1) and
    // mu = (1 - a_i)(1 - beta a_i) = (1-a_i)(1-a_j)(a_i-a_j) / den with
    // den = (a_j - 1) a_j - (a_i - 1) a_i. Whenever the eps^2 sign
    // condition admits the pair, mu is positive.
    const double den = (a_j - 1.0) * a_j - (a_i - 1.0) * a_i;
    if (den == 0.0) {
        throw SignConditionViolated("mu_psi: degenerate pair, no Psi eigenpair");
    }
    return (1.0 - a_i) * (1.0 - a_j) * (a_i - a_j) / den;
}

double mu_upsilon(double a_i, double a_j, double eps) {
    if (eps == 0.0) throw InvalidArgument("mu_upsilon: eps must be nonzero");
    const double t = eps * eps;
    const double d = a_j - a_i;
    const double mi = 1.0 - a_i;
    const double mj = 1.0 - a_j;
    const double first = d * d / (a_i * a_i + t * a_j * a_j);
    const double second = (mi * mj) * (mi * mj) / (mi * mi + mj * mj / t);
    return first * second;
}

double upsilon_opt_eps_sq(double a_i, double a_j) {
    const double den = (1.0 - a_i) * a_j;
    if (den == 0.0) {
        throw SignConditionViolated("upsilon_opt_eps_sq: eigenvalue at 1 admits no maximizer");
    }
    return std::fabs((1.0 - a_j) * a_i / den);
}

double mu_upsilon_max(double a_i, double a_j) {
    const double den = std::fabs((1.0 - a_i) * a_i) + std::fabs((1.0 - a_j) * a_j);
    if (den == 0.0) {
        throw SignConditionViolated("mu_upsilon_max: degenerate pair");
    }
    const double r = (1.0 - a_i) * (1.0 - a_j) * (a_i - a_j) / den;
    return r * r;
}

double lambda_star_raa1(const Spectrum& spectrum) {
    check_no_zero_eigenvalue(spectrum.distinct);
    double best = 0.0;
    for (std::size_t i = 0; i < spectrum.distinct.size(); ++i) {
        for (std::size_t j = i + 1; j < spectrum.distinct.size(); ++j) {
            const double a_i = spectrum.distinct[i];
            const double a_j = spectrum.distinct[j];
            const double den = std::fabs((1.0 - a_i) * a_i) + std::fabs((1.0 - a_j) * a_j);
            if (den == 0.0) continue;  // both eigenvalues in {0,1}; term undefined
            const double r = (1.0 - a_i) * (1.0 - a_j) * (a_i - a_j) / den;
            best = std::max(best, r * r);
        }
    }
    return best;
}

NepEigenpair construct_eigpair(const Spectrum& spectrum, MapKind kind, int i1, int i2,
                               const EigpairOptions& opts) {
    check_group_index(spectrum, i1, "construct_eigpair");
    check_group_index(spectrum, i2, "construct_eigpair");
    if (i1 == i2) {
        throw InvalidArgument("construct_eigpair: the two groups must be distinct");
    }
    const double a1 = spectrum.distinct[static_cast<std::size_t>(i1)];
    const double a2 = spectrum.distinct[static_cast<std::size_t>(i2)];

    const auto match_required = [&](double required_eps_sq, const char* map_name) {
        if (required_eps_sq <= 0.0) {
            throw SignConditionViolated(std::string(map_name) +
                                        ": sign condition fails, no such eigenpair");
        }
        if (opts.eps) {
            const double got = (*opts.eps) * (*opts.eps);
            if (std::fabs(got - required_eps_sq) > 1e-9 * std::fabs(required_eps_sq)) {
                throw SignConditionViolated(std::string(map_name) +
                                            ": eps does not satisfy the eigenpair condition");
            }
            return *opts.eps;
        }
        return std::sqrt(required_eps_sq);
    };

    NepEigenpair pair;
    pair.map_kind = kind;
    pair.i1 = i1;
    pair.i2 = i2;

    switch (kind) {
        case MapKind::I2: {
            if (a1 * a2 <= 0.0) {
                throw SignConditionViolated("I2: eigenvalues must share a sign");
            }
            pair.eps = match_required(a1 / a2, "I2");
            pair.value = i2_value(a1, a2);
            break;
        }
        case MapKind::Pi: {
            pair.eps = opts.eps ? *opts.eps : std::sqrt(std::fabs(a1 / a2));
            if (pair.eps == 0.0) throw InvalidArgument("Pi: eps must be nonzero");
            pair.value = lambda_two_mode(a1, a2, pair.eps);
            break;
        }
        case MapKind::Psi: {
            pair.eps = match_required(psi_eps_sq(a1, a2), "Psi");
            pair.value = mu_psi(a1, a2);
            break;
        }
        case MapKind::Upsilon: {
            if (std::fabs(1.0 - a1) * std::fabs(1.0 - a2) == 0.0) {
                throw SignConditionViolated("Upsilon: eigenvalue at 1 admits no nonzero eigenpair");
            }
            pair.eps = opts.eps ? *opts.eps : std::sqrt(upsilon_opt_eps_sq(a1, a2));
            if (pair.eps == 0.0) throw InvalidArgument("Upsilon: eps must be nonzero");
            pair.value = mu_upsilon(a1, a2, pair.eps);
            break;
        }
    }

    const std::size_t n = spectrum.dimension();
    DenseVector u(n);
    if (!opts.spread) {
        const int c1 = spectrum.group_offset(i1);
        const int c2 = spectrum.group_offset(i2);
        for (std::size_t i = 0; i < n; ++i) {
            u[i] = spectrum.basis(i, c1) + pair.eps * spectrum.basis(i, c2);
        }
    } else {
        std::uint64_t state = opts.seed;
        const auto fill = [&](int group, double total) {
            const int off = spectrum.group_offset(group);
            const int mult = spectrum.multiplicity[static_cast<std::size_t>(group)];
            const auto c = spread_coefficients(mult, total, state);
            for (int s = 0; s < mult; ++s) {
                for (std::size_t i = 0; i < n; ++i) u[i] += c[static_cast<std::size_t>(s)] * spectrum.basis(i, off + s);
            }
        };
        fill(i1, 1.0);
        fill(i2, pair.eps);
    }
    pair.vector = u;
    return pair;
}

double verify_eigenpair(const DenseMatrix& A, const NepEigenpair& pair) {
    const DenseVector& u = pair.vector;
    const double nu = norm2(u);
    if (nu < linalg::kZeroVectorThreshold) {
        throw ZeroResidual("verify_eigenpair: zero vector");
    }

    const auto apply_m = [&](const DenseVector& v) {  // M v = v - A v
        DenseVector mv = v;
        linalg::axpy(-1.0, matvec(A, v), mv);
        return mv;
    };
    const auto check_intermediate = [&](const DenseVector& v, const char* stage) {
        if (norm2(v) < linalg::kZeroVectorThreshold) {
            throw IntermediateBreakdown(std::string("verify_eigenpair: ") + stage +
                                        " vanished, map undefined");
        }
    };

    DenseVector mapped(u.size());
    switch (pair.map_kind) {
        case MapKind::I2: {
            const double a = linalg::alpha(A, u);
            DenseVector t = u;
            linalg::axpy(-a, matvec(A, u), t);
            mapped = t;
            linalg::axpy(-a, matvec(linalg::transpose(A), t), mapped);
            break;
        }
        case MapKind::Pi: {
            DenseVector t = linalg::phi_map(A, u);
            check_intermediate(t, "Phi(u)");
            mapped = linalg::phi_map(A, t);
            break;
        }
        case MapKind::Psi: {
            mapped = apply_m(linalg::phi_map(A, u));
            break;
        }
        case MapKind::Upsilon: {
            DenseVector psi = apply_m(linalg::phi_map(A, u));
            check_intermediate(psi, "Psi(u)");
            mapped = apply_m(linalg::phi_map(A, psi));
            break;
        }
    }

    DenseVector resid = mapped;
    linalg::axpy(-pair.value, u, resid);
    return norm2(resid) / nu;
}

double worst_case_skew(const SchurBlocks& blocks) {
    const double m = blocks.max_modulus();
    return m / std::sqrt(1.0 + m * m);
}

double raa1_factor_skew(const SchurBlocks& blocks) {
    const double m = blocks.max_modulus();
    return m / std::pow(1.0 + m * m, 0.25);
}

double skew_factor_restricted(const SchurBlocks& blocks, const std::vector<int>& block_subset) {
    double m = 0.0;
    for (int j : block_subset) {
        if (j < 0 || j >= static_cast<int>(blocks.blocks.size())) {
            throw InvalidArgument("skew_factor_restricted: block index out of range");
        }
        m = std::max(m, blocks.blocks[static_cast<std::size_t>(j)].modulus);
    }
    return m / std::sqrt(1.0 + m * m);
}

FactorReport skew_report(const SchurBlocks& blocks) {
    FactorReport rep;
    rep.regime = Regime::SkewM;
    for (std::size_t j = 0; j < blocks.blocks.size(); ++j) {
        PairFactor p;
        p.i = static_cast<int>(j);
        p.j = static_cast<int>(j);
        const double m = blocks.blocks[j].modulus;
        p.value = m / std::sqrt(1.0 + m * m);
        p.eps_sq = m;
        rep.pairs.push_back(p);
        rep.worst_case_rho = std::max(rep.worst_case_rho, p.value);
    }
    return rep;
}

double qfactor(const DenseMatrix& A) {
    if (A.is_symmetric(1e-12)) {
        return worst_case_gmres1(spectral::eig_symmetric(A)).worst_case_rho;
    }
    const DenseMatrix M = linalg::DenseMatrix::identity(A.size()) - A;
    if (M.is_skew_symmetric(1e-12)) {
        return worst_case_skew(spectral::schur_skew(M));
    }
    throw UnsupportedStructure("qfactor: A is neither symmetric nor I - A skew-symmetric");
}

std::pair<double, double> alpha_range_skew(const SchurBlocks& blocks) {
    const double hi = blocks.max_modulus();
    const double lo = blocks.min_modulus();
    return {1.0 / (1.0 + hi * hi), 1.0 / (1.0 + lo * lo)};
}

}  // namespace rkl::theory
