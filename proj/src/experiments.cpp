#include "rkl/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <istream>
#include <set>
#include <sstream>
#include <thread>

#include "rkl/matrix_io.hpp"

namespace rkl::experiments {

namespace {

constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

std::uint64_t splitmix64(std::uint64_t& state) {
    state += kGoldenGamma;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double uniform_pm1(std::uint64_t& state) {
    return 2.0 * (static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53) - 1.0;
}

std::uint64_t trial_stream(std::uint64_t seed, int trial) {
    return seed + static_cast<std::uint64_t>(trial + 1) * kGoldenGamma;
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string join_ints(const std::vector<int>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(v[i]);
    }
    return out;
}

int thread_cap() {
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    if (const char* env = std::getenv("RKL_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1) n = std::min(n, cap);
    }
    return n;
}

// --- minimal SHA-1 for the metadata content hash -------------------------

struct Sha1 {
    std::uint32_t h[5] = {0x67452301u, 0xEFCDAB89u, 0x98BADCFEu, 0x10325476u, 0xC3D2E1F0u};
    std::uint64_t total = 0;
    unsigned char block[64];
    std::size_t fill = 0;

    static std::uint32_t rol(std::uint32_t v, int s) { return (v << s) | (v >> (32 - s)); }

    void process(const unsigned char* p) {
        std::uint32_t w[80];
        for (int i = 0; i < 16; ++i) {
            w[i] = (std::uint32_t(p[4 * i]) << 24) | (std::uint32_t(p[4 * i + 1]) << 16) |
                   (std::uint32_t(p[4 * i + 2]) << 8) | std::uint32_t(p[4 * i + 3]);
        }
        for (int i = 16; i < 80; ++i) w[i] = rol(w[i - 3] ^ w[i - 8] ^ w[i - 14] ^ w[i - 16], 1);
        std::uint32_t a = h[0], b = h[1], c = h[2], d = h[3], e = h[4];
        for (int i = 0; i < 80; ++i) {
            std::uint32_t f, k;
            if (i < 20) { f = (b & c) | (~b & d); k = 0x5A827999u; }
            else if (i < 40) { f = b ^ c ^ d; k = 0x6ED9EBA1u; }
            else if (i < 60) { f = (b & c) | (b & d) | (c & d); k = 0x8F1BBCDCu; }
            else { f = b ^ c ^ d; k = 0xCA62C1D6u; }
            const std::uint32_t t = rol(a, 5) + f + e + k + w[i];
            e = d; d = c; c = rol(b, 30); b = a; a = t;
        }
        h[0] += a; h[1] += b; h[2] += c; h[3] += d; h[4] += e;
    }

    void update(const void* data, std::size_t len) {
        const unsigned char* p = static_cast<const unsigned char*>(data);
        total += len;
        while (len > 0) {
            const std::size_t take = std::min(len, sizeof(block) - fill);
            std::memcpy(block + fill, p, take);
            fill += take;
            p += take;
            len -= take;
            if (fill == sizeof(block)) {
                process(block);
                fill = 0;
            }
        }
    }

    std::string hex_digest() {
        const std::uint64_t bits = total * 8;
        const unsigned char pad = 0x80;
        update(&pad, 1);
        const unsigned char zero = 0x00;
        while (fill != 56) update(&zero, 1);
        unsigned char len_be[8];
        for (int i = 0; i < 8; ++i) len_be[i] = static_cast<unsigned char>(bits >> (56 - 8 * i));
        update(len_be, 8);
        char out[41];
        for (int i = 0; i < 5; ++i) std::snprintf(out + 8 * i, 9, "%08x", h[i]);
        return std::string(out, 40);
    }
};

// --- builtin instances ----------------------------------------------------

// 8x8 skew generator behind A4; integer entries over 8.
const int kM4[8][8] = {
    {0, 1, 0, -5, 0, 0, 0, 2},
    {-1, 0, 0, 0, 5, 0, -2, 0},
    {0, 0, 0, 0, -2, -1, 5, 0},
    {5, 0, 0, 0, -1, -2, 0, 0},
    {0, -5, 2, 1, 0, 0, 0, 0},
    {0, 0, 1, 2, 0, 0, 0, -5},
    {0, 2, -5, 0, 0, 0, 0, 1},
    {-2, 0, 0, 0, 0, 5, -1, 0},
};

DenseMatrix load_matrix(const std::string& name_or_path) {
    if (is_builtin_matrix(name_or_path)) return builtin_matrix(name_or_path);
    return io::read_matrix_file(name_or_path);
}

}  // namespace

bool is_builtin_matrix(const std::string& name) {
    return name == "A1" || name == "A2" || name == "A3" || name == "A4" ||
           name == "CA1" || name == "CA2" || name == "CA3";
}

DenseMatrix builtin_matrix(const std::string& name) {
    if (name == "A1" || name == "CA1") return DenseMatrix::diagonal({1.0, 2.0, 3.0});
    if (name == "A2") return DenseMatrix::diagonal({0.5, 0.25, 0.125, 0.0625, 0.03125});
    if (name == "A3") return DenseMatrix::diagonal({-1.0, 2.0, 3.0, 4.0});
    if (name == "CA2") return DenseMatrix::diagonal({-0.5, -4.0, 2.0});
    if (name == "CA3") return DenseMatrix::diagonal({0.5, 1.5, 1.0 / 3.0, -2.0});
    if (name == "A4") {
        DenseMatrix a(8);
        for (std::size_t i = 0; i < 8; ++i) {
            for (std::size_t j = 0; j < 8; ++j) {
                a(i, j) = (i == j ? 1.0 : 0.0) - kM4[i][j] / 8.0;
            }
        }
        return a;
    }
    throw InvalidArgument("unknown builtin matrix: " + name);
}

exact::RationalMatrix builtin_matrix_exact(const std::string& name) {
    using exact::Rational;
    if (name == "A1" || name == "CA1") {
        return exact::RationalMatrix::diagonal({Rational(1), Rational(2), Rational(3)});
    }
    if (name == "A2") {
        return exact::RationalMatrix::diagonal(
            {Rational(1, 2), Rational(1, 4), Rational(1, 8), Rational(1, 16), Rational(1, 32)});
    }
    if (name == "A3") {
        return exact::RationalMatrix::diagonal(
            {Rational(-1), Rational(2), Rational(3), Rational(4)});
    }
    if (name == "CA2") {
        return exact::RationalMatrix::diagonal({Rational(-1, 2), Rational(-4), Rational(2)});
    }
    if (name == "CA3") {
        return exact::RationalMatrix::diagonal(
            {Rational(1, 2), Rational(3, 2), Rational(1, 3), Rational(-2)});
    }
    if (name == "A4") {
        exact::RationalMatrix a(8);
        for (std::size_t i = 0; i < 8; ++i) {
            for (std::size_t j = 0; j < 8; ++j) {
                a(i, j) = Rational(i == j ? 1 : 0) - Rational(kM4[i][j], 8);
            }
        }
        return a;
    }
    throw InvalidArgument("unknown builtin exact matrix: " + name);
}

exact::RationalVector counterexample_vector(int case_index) {
    using exact::Rational;
    switch (case_index) {
        case 1: return {Rational(15), Rational(5), Rational(1)};
        case 2: return {Rational(38), Rational(1), Rational(45)};
        case 3: return {Rational(23), Rational(60), Rational(77), Rational(1)};
        default: throw InvalidArgument("counterexample case must be 1, 2 or 3");
    }
}

DenseVector random_x0(std::size_t n, std::uint64_t seed, int trial) {
    std::uint64_t state = trial_stream(seed, trial);
    DenseVector x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = uniform_pm1(state);
    return x;
}

double theoretical_rho_for(const DenseMatrix& A, const EnsembleConfig& cfg) {
    if (A.is_symmetric(1e-12)) {
        const auto spectrum = spectral::eig_symmetric(A);
        if (!cfg.mask.empty() && A.is_diagonal(1e-12)) {
            // Masked coordinates of a diagonal matrix kill the matching
            // eigenmodes; restrict the worst case to the surviving ones.
            std::set<int> groups;
            for (std::size_t k = 0; k < A.size(); ++k) {
                if (std::find(cfg.mask.begin(), cfg.mask.end(), static_cast<int>(k)) !=
                    cfg.mask.end()) {
                    continue;
                }
                const double a = A(k, k);
                for (int g = 0; g < spectrum.group_count(); ++g) {
                    if (std::fabs(a - spectrum.distinct[static_cast<std::size_t>(g)]) <=
                        spectral::group_tolerance() * std::max(1.0, std::fabs(a))) {
                        groups.insert(g);
                        break;
                    }
                }
            }
            return theory::worst_case_gmres1(spectrum, {groups.begin(), groups.end()}).worst_case_rho;
        }
        return theory::worst_case_gmres1(spectrum).worst_case_rho;
    }
    const DenseMatrix M = DenseMatrix::identity(A.size()) - A;
    if (M.is_skew_symmetric(1e-12)) {
        const auto blocks = spectral::schur_skew(M);
        if (!cfg.block_init.empty()) {
            return theory::skew_factor_restricted(blocks, cfg.block_init);
        }
        return theory::worst_case_skew(blocks);
    }
    throw UnsupportedStructure("theoretical_rho_for: unsupported matrix structure");
}

EnsembleResult run_ensemble(const EnsembleConfig& cfg) {
    if (cfg.trials < 1) throw InvalidArgument("run_ensemble: trials must be >= 1");
    if (cfg.solver != "gmres1" && cfg.solver != "raa1" && cfg.solver != "stationary") {
        throw InvalidArgument("run_ensemble: unknown solver '" + cfg.solver + "'");
    }
    const DenseMatrix A = load_matrix(cfg.matrix);
    const std::size_t n = A.size();
    for (int m : cfg.mask) {
        if (m < 0 || m >= static_cast<int>(n)) {
            throw InvalidArgument("run_ensemble: mask index out of range");
        }
    }

    std::optional<spectral::SchurBlocks> blocks;
    if (!cfg.block_init.empty()) {
        const DenseMatrix M = DenseMatrix::identity(n) - A;
        if (!M.is_skew_symmetric(1e-12)) {
            throw InvalidArgument("run_ensemble: block_init requires skew-symmetric I - A");
        }
        blocks = spectral::schur_skew(M);
        for (int j : cfg.block_init) {
            if (j < 0 || j >= static_cast<int>(blocks->blocks.size())) {
                throw InvalidArgument("run_ensemble: block_init index out of range");
            }
        }
    }

    EnsembleResult out;
    out.config = cfg;
    out.theoretical_rho = theoretical_rho_for(A, cfg);
    out.trials.resize(static_cast<std::size_t>(cfg.trials));

    solvers::SolveConfig scfg;
    scfg.tol = cfg.tol;
    scfg.max_iters = cfg.max_iters;
    const DenseVector b(n);

    const auto run_trial = [&](int t) {
        DenseVector x0(n);
        if (blocks) {
            std::uint64_t state = trial_stream(cfg.seed, t);
            for (int j : cfg.block_init) {
                const auto& blk = blocks->blocks[static_cast<std::size_t>(j)];
                for (int w = 0; w < blk.width; ++w) {
                    const double c = uniform_pm1(state);
                    for (std::size_t i = 0; i < n; ++i) x0[i] += c * blocks->q(i, blk.col + w);
                }
            }
        } else {
            x0 = random_x0(n, cfg.seed, t);
            for (int m : cfg.mask) x0[static_cast<std::size_t>(m)] = 0.0;
        }

        solvers::SolveResult res;
        if (cfg.solver == "gmres1") res = solvers::gmres1(A, b, x0, scfg);
        else if (cfg.solver == "raa1") res = solvers::raa1(A, b, x0, scfg);
        else res = solvers::stationary(A, b, x0, scfg);

        TrialResult& tr = out.trials[static_cast<std::size_t>(t)];
        tr.residual_norms = std::move(res.trace.residual_norms);
        tr.rho_series = std::move(res.trace.rho_series);
        tr.alphas = std::move(res.trace.alphas);
        tr.termination = res.trace.termination;
    };

    const int workers = std::min(thread_cap(), cfg.trials);
    if (workers <= 1) {
        for (int t = 0; t < cfg.trials; ++t) run_trial(t);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (int t = next.fetch_add(1); t < cfg.trials; t = next.fetch_add(1)) {
                    run_trial(t);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    for (const auto& tr : out.trials) {
        if (!tr.rho_series.empty()) {
            out.max_observed_rho_tail = std::max(out.max_observed_rho_tail, tr.rho_series.back());
        }
    }
    return out;
}

StructuredRun run_structured(const DenseMatrix& A, const DenseVector& x0,
                             const std::string& solver, double tol, int max_iters) {
    solvers::SolveConfig scfg;
    scfg.tol = tol;
    scfg.max_iters = max_iters;
    const DenseVector b(A.size());

    StructuredRun out;
    if (solver == "gmres1") out.result = solvers::gmres1(A, b, x0, scfg);
    else if (solver == "raa1") out.result = solvers::raa1(A, b, x0, scfg);
    else if (solver == "stationary") out.result = solvers::stationary(A, b, x0, scfg);
    else throw InvalidArgument("run_structured: unknown solver '" + solver + "'");

    const DenseVector r0 = linalg::matvec(A, x0);
    const double nr0 = linalg::norm2(r0);
    if (nr0 == 0.0) {
        out.predicted_rho = 0.0;
        return out;
    }
    const double significant = 1e-12 * nr0;

    if (A.is_symmetric(1e-12)) {
        const auto spectrum = spectral::eig_symmetric(A);
        std::vector<int> support;
        std::vector<double> coeff;  // group coefficient magnitudes
        for (int g = 0; g < spectrum.group_count(); ++g) {
            const int off = spectrum.group_offset(g);
            const int mult = spectrum.multiplicity[static_cast<std::size_t>(g)];
            double ss = 0.0;
            for (int s = 0; s < mult; ++s) {
                double c = 0.0;
                for (std::size_t i = 0; i < A.size(); ++i) c += spectrum.basis(i, off + s) * r0[i];
                ss += c * c;
            }
            const double mag = std::sqrt(ss);
            if (mag > significant) {
                support.push_back(g);
                coeff.push_back(mag);
            }
        }
        if (support.size() <= 1) {
            out.predicted_rho = 0.0;
        } else if (support.size() == 2) {
            // lambda_ij depends on eps^2 only, so magnitudes suffice.
            out.predicted_rho = theory::rho_for_two_modes(
                spectrum.distinct[static_cast<std::size_t>(support[0])],
                spectrum.distinct[static_cast<std::size_t>(support[1])], coeff[1] / coeff[0]);
        } else {
            out.predicted_rho = theory::worst_case_gmres1(spectrum, support).worst_case_rho;
            out.predicted_is_bound = true;
        }
        return out;
    }

    const DenseMatrix M = DenseMatrix::identity(A.size()) - A;
    if (M.is_skew_symmetric(1e-12)) {
        const auto blocks = spectral::schur_skew(M);
        double dominant = 0.0;
        for (std::size_t j = 0; j < blocks.blocks.size(); ++j) {
            const DenseVector p = spectral::project_onto_block(blocks, static_cast<int>(j), r0);
            if (linalg::norm2(p) > significant) {
                dominant = std::max(dominant, blocks.blocks[j].modulus);
            }
        }
        out.predicted_rho = dominant / std::sqrt(1.0 + dominant * dominant);
        return out;
    }
    throw UnsupportedStructure("run_structured: unsupported matrix structure");
}

namespace {

void append_trace_rows(std::string& out, int trial, const std::vector<double>& norms,
                       const std::vector<double>& rhos, const std::vector<double>& alphas,
                       solvers::Termination term) {
    const std::size_t rows = norms.size();
    for (std::size_t k = 0; k < rows; ++k) {
        out += std::to_string(trial);
        out += ",";
        out += std::to_string(k);
        out += ",";
        out += fmt(norms[k]);
        out += ",";
        if (k >= 1) out += fmt(rhos[k - 1]);
        out += ",";
        if (k < alphas.size()) out += fmt(alphas[k]);
        out += ",";
        if (k + 1 == rows) out += solvers::to_string(term);
        out += "\n";
    }
}

}  // namespace

std::string ensemble_csv(const EnsembleResult& result) {
    std::string out = "trial,k,residual_norm,rho_k,alpha_k,termination\n";
    for (std::size_t t = 0; t < result.trials.size(); ++t) {
        const auto& tr = result.trials[t];
        append_trace_rows(out, static_cast<int>(t), tr.residual_norms, tr.rho_series, tr.alphas,
                          tr.termination);
    }
    return out;
}

std::string trace_csv(const solvers::IterationTrace& trace) {
    std::string out = "trial,k,residual_norm,rho_k,alpha_k,termination\n";
    append_trace_rows(out, 0, trace.residual_norms, trace.rho_series, trace.alphas,
                      trace.termination);
    return out;
}

std::string content_hash(const std::string& content) {
    Sha1 sha;
    const std::string header = "blob " + std::to_string(content.size()) + '\0';
    sha.update(header.data(), header.size());
    sha.update(content.data(), content.size());
    return sha.hex_digest();
}

std::string ensemble_metadata(const EnsembleResult& result) {
    const EnsembleConfig& cfg = result.config;
    std::string config_block;
    config_block += "matrix=" + cfg.matrix + "\n";
    config_block += "trials=" + std::to_string(cfg.trials) + "\n";
    config_block += "seed=" + std::to_string(cfg.seed) + "\n";
    config_block += "solver=" + cfg.solver + "\n";
    config_block += "tol=" + fmt(cfg.tol) + "\n";
    config_block += "max_iters=" + std::to_string(cfg.max_iters) + "\n";
    config_block += "mask=" + join_ints(cfg.mask) + "\n";
    config_block += "block_init=" + join_ints(cfg.block_init) + "\n";

    std::ostringstream matrix_text;
    io::write_matrix(matrix_text, load_matrix(cfg.matrix));

    std::string out = config_block;
    out += "distribution=uniform(-1,1)\n";
    out += "rng=splitmix64(seed+(trial+1)*0x9E3779B97F4A7C15)\n";
    out += "transient_cutoff=20\n";  // first k where bound checks apply
    out += "theoretical_rho=" + fmt(result.theoretical_rho) + "\n";
    out += "max_observed_rho_tail=" + fmt(result.max_observed_rho_tail) + "\n";
    out += "content_hash=" + content_hash(config_block + matrix_text.str()) + "\n";
    return out;
}

EnsembleConfig parse_config(std::istream& in) {
    EnsembleConfig cfg;
    std::string line;
    const auto parse_int_list = [](const std::string& s) {
        std::vector<int> v;
        std::string cur;
        std::istringstream ss(s);
        while (std::getline(ss, cur, ',')) {
            if (cur.empty()) continue;
            v.push_back(std::stoi(cur));
        }
        return v;
    };
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError("config line " + std::to_string(lineno) + ": expected key=value");
        }
        const std::string key = line.substr(0, eq);
        const std::string val = line.substr(eq + 1);
        try {
            if (key == "matrix") cfg.matrix = val;
            else if (key == "trials") cfg.trials = std::stoi(val);
            else if (key == "seed") cfg.seed = std::stoull(val);
            else if (key == "solver") cfg.solver = val;
            else if (key == "tol") cfg.tol = std::stod(val);
            else if (key == "max_iters") cfg.max_iters = std::stoi(val);
            else if (key == "mask") cfg.mask = parse_int_list(val);
            else if (key == "block_init") cfg.block_init = parse_int_list(val);
            else throw ParseError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        } catch (const std::invalid_argument&) {
            throw ParseError("config line " + std::to_string(lineno) + ": bad value for '" + key + "'");
        } catch (const std::out_of_range&) {
            throw ParseError("config line " + std::to_string(lineno) + ": value out of range for '" + key + "'");
        }
    }
    return cfg;
}

}  // namespace rkl::experiments
