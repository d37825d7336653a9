#include "criteria.hpp"

#include "spinent/correlations.hpp"
#include "spinent/critical.hpp"
#include "spinent/measures.hpp"
#include "spinent/model.hpp"
#include "spinent/nmr.hpp"
#include "spinent/spectrum.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <exception>
#include <map>
#include <random>
#include <string>
#include <tuple>

namespace spinent::verify {

namespace {

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list args;
    va_start(args, f);
    std::vsnprintf(buf, sizeof buf, f, args);
    va_end(args);
    return buf;
}

// Tracks the worst deviation of a named quantity against its tolerance.
struct MaxError {
    MaxError(const char* n, double tol) : name(n), tolerance(tol) {}

    const char* name;
    double tolerance;
    double worst = 0.0;
    std::string where;

    void add(double err, const std::string& at) {
        if (!(err <= worst)) {
            worst = err;
            where = at;
        }
    }
    bool ok() const { return worst <= tolerance; }
    std::string report() const { return fmt("%s max error %.3g at %s (tol %.0e)", name, worst, where.c_str(), tolerance); }
};

std::string first_failure(std::initializer_list<const MaxError*> errors) {
    for (const MaxError* e : errors)
        if (!e->ok()) return e->report();
    return {};
}

double pair_concurrence(const DensityMatrix& rho, int n, int m) {
    const std::array<int, 2> keep{n, m};
    return concurrence_wootters(partial_trace(rho, keep)).c;
}

// ---------------------------------------------------------------------------
// 1. N = 4 eigenstates: energies, (s, k) labels and concurrences.

struct ReferenceRow {
    int s;  // spin-1/2 units; SectorLabel::s counts sigma^z, so it is 2 s
    int k;
    double energy;
    double c_nn;
    double c_nnn;
};

std::vector<ReferenceRow> reference_eigenstates(double delta) {
    const auto [mu1, mu2] = n4_mu(delta);
    auto frac = [](double num, double mu) { return std::max(0.0, num / (2.0 + mu * mu)); };
    std::vector<ReferenceRow> rows{
        {-2, 0, delta, 0.0, 0.0},
        {-1, 0, 1.0, 0.5, 0.5},
        {-1, 1, 0.0, 0.5, 0.5},
        {-1, 2, -1.0, 0.5, 0.5},
        {-1, 3, 0.0, 0.5, 0.5},
        {0, 0, mu1, frac(-2.0 * mu1 - 1.0, mu1), frac(2.0 - mu1 * mu1, mu1)},
        {0, 0, mu2, frac(2.0 * mu2 - 1.0, mu2), frac(2.0 - mu2 * mu2, mu2)},
        {0, 1, 0.0, 0.0, 1.0},
        {0, 2, 0.0, 0.0, 1.0},
        {0, 2, -delta, 0.0, 0.0},
        {0, 3, 0.0, 0.0, 1.0},
    };
    // s > 0 follows from the spinflip.
    for (std::size_t i = 0, count = rows.size(); i < count; ++i) {
        if (rows[i].s < 0) rows.push_back({-rows[i].s, rows[i].k, rows[i].energy, rows[i].c_nn, rows[i].c_nnn});
    }
    return rows;
}

std::string check_n4_eigenstates(const Options&) {
    constexpr double tol = 1e-10;
    std::vector<std::string> mismatches;
    for (double delta : {-2.0, -1.0, 0.0, 1.0, 2.0, 5.0}) {
        const SpectrumResult sr = diagonalize(ModelSpec::ring(4, 1.0, delta));
        struct Computed {
            int s;
            int k;
            double energy;
            double c_nn;
            double c_nnn;
            bool used = false;
        };
        std::vector<Computed> got;
        for (std::size_t j = 0; j < sr.size(); ++j) {
            const DensityMatrix rho = DensityMatrix::from_pure(sr.state(j));
            const std::array<double, 4> nn{pair_concurrence(rho, 1, 2), pair_concurrence(rho, 2, 3),
                                           pair_concurrence(rho, 3, 4), pair_concurrence(rho, 1, 4)};
            const std::array<double, 2> nnn{pair_concurrence(rho, 1, 3), pair_concurrence(rho, 2, 4)};
            for (double c : nn)
                if (std::abs(c - nn[0]) > tol) return fmt("Delta=%g state %zu: nearest-neighbour C not uniform", delta, j);
            if (std::abs(nnn[1] - nnn[0]) > tol) return fmt("Delta=%g state %zu: next-nearest C not uniform", delta, j);
            if (!sr.label(j).k) return fmt("Delta=%g state %zu has no momentum label", delta, j);
            got.push_back({sr.label(j).s, *sr.label(j).k, sr.energy(j), nn[0], nnn[0]});
        }
        const std::vector<ReferenceRow> rows = reference_eigenstates(delta);
        if (rows.size() != got.size()) return fmt("Delta=%g: %zu table rows vs %zu eigenstates", delta, rows.size(), got.size());
        auto same_level = [&](const Computed& c, const ReferenceRow& row) {
            return !c.used && c.s == 2 * row.s && c.k == row.k && std::abs(c.energy - row.energy) <= tol;
        };
        std::vector<const ReferenceRow*> unmatched;
        for (const ReferenceRow& row : rows) {
            auto match = std::find_if(got.begin(), got.end(), [&](const Computed& c) {
                return same_level(c, row) && std::abs(c.c_nn - row.c_nn) <= tol && std::abs(c.c_nnn - row.c_nnn) <= tol;
            });
            if (match == got.end()) {
                unmatched.push_back(&row);
            } else {
                match->used = true;
            }
        }
        for (const ReferenceRow* row : unmatched) {
            auto level = std::find_if(got.begin(), got.end(), [&](const Computed& c) { return same_level(c, *row); });
            if (level == got.end()) {
                mismatches.push_back(fmt("Delta=%g: no eigenstate with s=%d k=%d E=%.12g", delta, row->s, row->k, row->energy));
                continue;
            }
            level->used = true;
            mismatches.push_back(fmt("Delta=%g s=%d k=%d: C_nn=%.6g C_nnn=%.6g, expected %.6g %.6g", delta, row->s, row->k,
                                     level->c_nn, level->c_nnn, row->c_nn, row->c_nnn));
        }
    }
    if (mismatches.empty()) return {};
    std::string out = fmt("%zu mismatching rows; ", mismatches.size());
    for (std::size_t i = 0; i < mismatches.size(); ++i) out += (i ? "; " : "") + mismatches[i];
    return out;
}

// ---------------------------------------------------------------------------
// 2. N = 4 closed forms against the brute-force thermal pipeline.

std::string check_closed_form_n4(const Options&) {
    MaxError lz{"ln Z", 1e-10}, kzz{"K^zz", 1e-10}, kpm{"K^{+-}", 1e-10}, c{"C", 1e-10};
    for (double j : {1.0, -1.0}) {
        for (int a = 0; a < 50; ++a) {
            const double delta = -2.0 + 10.0 * a / 49.0;
            const SpectrumResult sr = diagonalize(ModelSpec::ring(4, j, delta));
            for (int b = 0; b < 50; ++b) {
                const double t = 0.05 + 2.95 * b / 49.0;
                const double beta = 1.0 / t;
                const ClosedFormN4 cf = closed_form_n4(delta, beta, j);
                const ThermalContext ctx = partition_function(sr, beta);
                const DensityMatrix rho = thermal_state(sr, beta);
                const CorrelationSet nn = correlations(rho, 1, 2);
                const CorrelationSet nnn = correlations(rho, 1, 3);
                const std::string at = fmt("J=%g Delta=%.6g T=%.6g", j, delta, t);
                lz.add(std::abs(cf.log_z - ctx.log_z), at);
                kzz.add(std::abs(cf.kzz_nn - nn.kzz), at);
                kzz.add(std::abs(cf.kzz_nnn - nnn.kzz), at);
                kpm.add(std::abs(cf.kpm_nn - nn.kpm), at);
                kpm.add(std::abs(cf.kpm_nnn - nnn.kpm), at);
                c.add(std::abs(cf.c_nn - pair_concurrence(rho, 1, 2)), at);
                c.add(std::abs(cf.c_nnn - pair_concurrence(rho, 1, 3)), at);
            }
        }
    }
    return first_failure({&lz, &kzz, &kpm, &c});
}

// ---------------------------------------------------------------------------
// 3. Odd rings at J = -1, Delta = -1/2.

std::string check_odd_ring_ground_state(const Options&) {
    MaxError kzz{"K^zz", 1e-8}, kpm{"K^{+-}", 1e-8}, c{"C", 1e-8};
    for (int n : {3, 5}) {
        const double n2 = static_cast<double>(n * n);
        const double kzz_expected = -0.5 + 3.0 / (2.0 * n2);
        const double kpm_expected = 5.0 / 16.0 + 3.0 / (16.0 * n2);
        const double c_expected = 0.375 * (1.0 - 1.0 / n2);
        const SpectrumResult sr = diagonalize(ModelSpec::ring(n, -1.0, -0.5));
        const DensityMatrix rho = thermal_state(sr, 1.0 / kGroundStateTemperature);
        for (int site = 1; site <= n; ++site) {
            const int other = site % n + 1;
            const int a = std::min(site, other);
            const int b = std::max(site, other);
            const CorrelationSet cs = correlations(rho, a, b);
            const std::string at = fmt("N=%d pair (%d,%d)", n, a, b);
            kzz.add(std::abs(cs.kzz - kzz_expected), at);
            kpm.add(std::abs(cs.kpm - kpm_expected), at);
            c.add(std::abs(pair_concurrence(rho, a, b) - c_expected), at);
            c.add(std::abs(concurrence_closed_form(cs).c - c_expected), at + " (closed form)");
        }
    }
    return first_failure({&kzz, &kpm, &c});
}

// ---------------------------------------------------------------------------
// 4. Critical temperature properties.

std::vector<SitePair> pairs_for(int n) {
    switch (n) {
        case 2:
        case 3:
            return {{1, 2}};
        case 4:
        case 5:
            return {{1, 2}, {1, 3}};
        default:
            return {{1, 2}, {1, 3}, {1, 4}};
    }
}

std::string check_tc(const Options& opts) {
    const std::vector<double> deltas = Range{-3.0, 8.0, 0.25}.values();
    std::vector<double> negated(deltas.size());
    std::transform(deltas.begin(), deltas.end(), negated.begin(), [](double d) { return -d; });

    // (N, J, pair.m) -> T_c per delta; `mirrored` holds J = -1 at -delta, so both
    // curves share the abscissa (J/|J|) delta.
    std::map<std::tuple<int, int, int>, std::vector<TcPoint>> curves;
    std::map<std::tuple<int, int>, std::vector<TcPoint>> mirrored;
    for (int n = 2; n <= 6; ++n) {
        for (const SitePair pair : pairs_for(n)) {
            for (int j : {1, -1}) curves[{n, j, pair.m}] = tc_curve(ModelSpec::ring(n, j, 0.0), pair, deltas, opts.jobs);
            mirrored[{n, pair.m}] = tc_curve(ModelSpec::ring(n, -1.0, 0.0), pair, negated, opts.jobs);
        }
    }

    for (const auto& [key, curve] : curves) {
        const auto [n, j, m] = key;
        for (const TcPoint& p : curve) {
            if (j * p.delta <= -1.0 && (p.tc != 0.0 || !p.identically_zero)) {
                return fmt("N=%d J=%d pair (1,%d) Delta=%g: T_c=%.9g, expected 0", n, j, m, p.delta, p.tc);
            }
        }
    }
    for (const auto& [key, curve] : mirrored) {
        const auto [n, m] = key;
        if (n % 2 != 0) continue;
        const auto& forward = curves.at({n, 1, m});
        for (std::size_t i = 0; i < curve.size(); ++i) {
            if (std::abs(forward[i].tc - curve[i].tc) > 1e-6) {
                return fmt("N=%d pair (1,%d): T_c(J,%g)=%.9g vs T_c(-J,%g)=%.9g", n, m, forward[i].delta,
                           forward[i].tc, curve[i].delta, curve[i].tc);
            }
        }
    }
    for (const auto& [n, m] : {std::pair{3, 2}, std::pair{5, 3}}) {
        for (const TcPoint& p : curves.at({n, 1, m})) {
            if (!p.identically_zero) return fmt("N=%d J>0 pair (1,%d) Delta=%g: T_c=%.9g, expected identically 0", n, m, p.delta, p.tc);
        }
    }
    for (int n : {3, 5}) {
        for (const SitePair pair : pairs_for(n)) {
            const auto& pos = curves.at({n, 1, pair.m});
            const auto& neg = mirrored.at({n, pair.m});
            for (std::size_t i = 0; i < pos.size(); ++i) {
                if (neg[i].tc < pos[i].tc - 1e-8) {
                    return fmt("N=%d pair (1,%d) (J/|J|)Delta=%g: T_c(J<0)=%.9g < T_c(J>0)=%.9g", n, pair.m,
                               pos[i].delta, neg[i].tc, pos[i].tc);
                }
            }
        }
    }
    return {};
}

// ---------------------------------------------------------------------------
// 5. ln Z derivative identities.

std::string check_derivatives(const Options& opts) {
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> delta_dist(-3.0, 8.0);
    std::uniform_real_distribution<double> t_dist(0.1, 3.0);
    std::bernoulli_distribution sign(0.5);
    MaxError kzz{"K^zz", 1e-6}, kpm{"K^{+-}", 1e-6};
    for (int n = 2; n <= 6; ++n) {
        for (int i = 0; i < 20; ++i) {
            const double delta = delta_dist(rng);
            const double t = t_dist(rng);
            const double j = sign(rng) ? 1.0 : -1.0;
            const ModelSpec spec = ModelSpec::ring(n, j, delta);
            const NearestNeighbour fd = nn_correlations_from_lnZ(spec, 1.0 / t);
            const CorrelationSet cs = correlations(thermal_state(diagonalize(spec), 1.0 / t), 1, 2);
            const std::string at = fmt("N=%d J=%g Delta=%.6g T=%.6g", n, j, delta, t);
            kzz.add(std::abs(fd.kzz - cs.kzz), at);
            kpm.add(std::abs(fd.kpm - cs.kpm), at);
        }
    }
    return first_failure({&kzz, &kpm});
}

// ---------------------------------------------------------------------------
// 6. Closed-form concurrence and entanglement conditions on random states.

Matrix random_sz_structured(std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::exponential_distribution<double> e(1.0);
    std::uniform_int_distribution<int> shape(0, 9);
    Eigen::Matrix2cd w;
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k) w(i, k) = cplx(g(rng), g(rng));
    const int kind = shape(rng);
    if (kind == 0) w.col(1).setZero();  // rank-one middle block
    Eigen::Matrix2cd mid = w * w.adjoint();
    double a = e(rng);
    double d = e(rng);
    if (kind == 1) a = 0.0;
    if (kind == 2) d = 0.0;
    Matrix rho = Matrix::Zero(4, 4);
    rho(0, 0) = a;
    rho.block(1, 1, 2, 2) = mid;
    rho(3, 3) = d;
    return rho / rho.trace().real();
}

std::string check_measure_oracles(const Options& opts) {
    std::mt19937_64 rng(opts.seed + 6);
    MaxError c{"closed form vs Wootters C", 1e-10};
    int sufficient_violations = 0;
    int necessary_violations = 0;
    for (int i = 0; i < 10000; ++i) {
        const DensityMatrix rho(2, random_sz_structured(rng));
        const CorrelationSet cs = correlations(rho, 1, 2);
        const double cw = concurrence_wootters(rho).c;
        c.add(std::abs(concurrence_closed_form(cs).c - cw), fmt("sample %d", i));
        const EntanglementConditions cond = entanglement_conditions(cs);
        if (cond.sufficient && !(cw > 0.0)) ++sufficient_violations;
        if (cw > 0.0 && !cond.necessary) ++necessary_violations;
    }
    if (!c.ok()) return c.report();
    if (sufficient_violations + necessary_violations > 0) {
        return fmt("%d sufficient-condition and %d necessary-condition violations", sufficient_violations,
                   necessary_violations);
    }
    return {};
}

// ---------------------------------------------------------------------------
// 7. Encoding stages.

struct StageFixture {
    char label;
    std::array<double, 5> kz;
    std::array<cplx, 5> kplus;
};

std::string check_nmr(const Options&) {
    const cplx h(0.5, 0.0);
    const cplx ih(0.0, 0.5);
    const cplx o{};
    const std::array<StageFixture, 5> table{{
        {'A', {0, 1, 0, 0, 1}, {h, o, h, -ih, o}},
        {'B', {0, 1, 0, 0, 1}, {ih, o, o, o, o}},
        {'C', {0, 0, 0, 0, 1}, {ih, o, o, o, o}},
        {'D', {0, 0, 0, 0, 0}, {ih, o, o, o, o}},
        {'E', {0, 0, 0, 0, 0}, {o, o, o, o, o}},
    }};
    MaxError k{"stage expectation", 1e-12};
    for (const StageFixture& row : table) {
        const StageExpectations e = stage_expectations(row.label);
        for (std::size_t q = 0; q < 5; ++q) {
            k.add(std::abs(e.kz[q] - row.kz[q]), fmt("stage %c K^z_%zu", row.label, q + 1));
            k.add(std::abs(e.kplus[q] - row.kplus[q]), fmt("stage %c K^+_%zu", row.label, q + 1));
        }
    }
    if (!k.ok()) return k.report();

    MaxError m{"stage entanglement", 1e-10};
    const double r32 = std::sqrt(1.5);
    const EntanglementReport a = stage_entanglement('A');
    for (const auto& b : a.single) m.add(b.value, "A single");
    for (const auto& b : a.pair) m.add(b.value, "A pair");
    for (const auto& p : a.concurrence) m.add(p.value, "A concurrence");

    const EntanglementReport b = stage_entanglement('B');
    m.add(std::abs(b.concurrence_value(3, 4) - 1.0), "B C_34");
    for (int q : {1, 2, 5}) m.add(b.single_value(q), fmt("B single %d", q));

    const EntanglementReport c = stage_entanglement('C');
    for (int q : {2, 3, 4}) m.add(std::abs(c.single_value(q) - 1.0), fmt("C single %d", q));
    const TripleTangle* tau = c.tangle(2, 3, 4);
    if (tau == nullptr) return "stage C: triple (2,3,4) reduction is not pure";
    m.add(std::abs(tau->tau - 1.0), "C tau_234");
    for (auto [p, q] : {std::pair{2, 3}, std::pair{2, 4}, std::pair{3, 4}}) {
        m.add(c.concurrence_value(p, q), fmt("C C_%d%d", p, q));
    }

    const EntanglementReport d = stage_entanglement('D');
    for (int q : {2, 3, 4, 5}) m.add(std::abs(d.single_value(q) - 1.0), fmt("D single %d", q));
    m.add(std::abs(d.pair_value(2, 3) - 1.0), "D C_23-45");
    m.add(std::abs(d.pair_value(2, 4) - r32), "D C_24-35");
    m.add(std::abs(d.pair_value(2, 5) - r32), "D C_25-34");

    const EntanglementReport e = stage_entanglement('E');
    for (const auto& s : e.single) m.add(std::abs(s.value - 1.0), fmt("E single %d", s.subset[0]));
    for (const auto& p : e.pair) m.add(std::abs(p.value - r32), fmt("E pair %d%d", p.subset[0], p.subset[1]));
    for (const auto& p : e.concurrence) m.add(p.value, fmt("E C_%d%d", p.n, p.m));
    return first_failure({&m});
}

// ---------------------------------------------------------------------------
// 8. Qualitative features of the N = 4 nearest-neighbour surface.

std::string check_surface_features(const Options& opts) {
    const std::vector<double> deltas = Range{-2.0, 8.0, 0.02}.values();
    const std::vector<double> temps = Range{0.02, 3.0, 0.02}.values();
    const SitePair pair{1, 2};
    std::vector<double> ground(deltas.size());
    std::vector<std::string> failures(deltas.size());
    parallel_for(deltas.size(), opts.jobs, [&](std::size_t i) {
        const PairThermalCurve curve(ModelSpec::ring(4, 1.0, deltas[i]), pair);
        ground[i] = curve.concurrence(kGroundStateTemperature).c;
        double previous = ground[i];
        for (double t : temps) {
            const double ct = curve.concurrence(t).c;
            if (ct > previous + 1e-12) {
                failures[i] = fmt("C increases with T at Delta=%.4g, T=%.4g (%.12g -> %.12g)", deltas[i], t, previous, ct);
                return;
            }
            previous = ct;
        }
    });
    for (const std::string& f : failures)
        if (!f.empty()) return f;

    std::size_t left = 0;
    std::size_t right = 0;
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        if (deltas[i] < -1.0 - 1e-9) {
            left = i;
            if (ground[i] > 1e-10) return fmt("C(Delta=%.4g, T->0) = %.3g, expected 0 below Delta=-1", deltas[i], ground[i]);
        }
        if (deltas[i] > -1.0 + 1e-9 && right == 0) right = i;
    }
    const double jump = ground[right] - ground[left];
    if (!(jump > 0.3)) return fmt("no discontinuity at Delta=-1: C jumps by %.6g", jump);
    for (std::size_t i = right; i + 1 < deltas.size(); ++i) {
        if (std::abs(ground[i + 1] - ground[i]) > 0.5 * jump) {
            return fmt("unexpected jump of C(T->0) between Delta=%.4g and %.4g", deltas[i], deltas[i + 1]);
        }
    }
    const auto peak = static_cast<std::size_t>(std::max_element(ground.begin(), ground.end()) - ground.begin());
    if (std::abs(deltas[peak] - 1.0) > 1e-9) return fmt("C(T->0) peaks at Delta=%.6g, expected 1", deltas[peak]);
    if (std::abs(ground[peak] - 0.5) > 1e-10) return fmt("peak value %.12g, expected 0.5", ground[peak]);
    return {};
}

}  // namespace

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> all{
        {1, "N=4 eigenstates: energies, (s,k) labels, concurrences", 1.0, check_n4_eigenstates},
        {2, "N=4 closed forms vs thermal pipeline on 50x50 grid", 30.0, check_closed_form_n4},
        {3, "Odd-ring ground state at J=-1, Delta=-1/2", std::nullopt, check_odd_ring_ground_state},
        {4, "Critical temperature properties, N=2..6", 300.0, check_tc},
        {5, "ln Z derivative identities", std::nullopt, check_derivatives},
        {6, "Closed-form concurrence and conditions on 10^4 random states", std::nullopt, check_measure_oracles},
        {7, "Encoding stages: expectation values and entanglement", 1.0, check_nmr},
        {8, "N=4 surface: jump at Delta=-1, peak at Delta=1, decrease in T", std::nullopt, check_surface_features},
    };
    return all;
}

CriterionResult run_criterion(const Criterion& c, const Options& opts) {
    CriterionResult r;
    r.id = c.id;
    r.title = c.title;
    r.budget_seconds = c.budget_seconds;
    const auto start = std::chrono::steady_clock::now();
    try {
        r.detail = c.check(opts);
    } catch (const std::exception& e) {
        r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.passed = r.detail.empty();
    if (r.passed && c.budget_seconds && r.seconds > *c.budget_seconds) {
        r.passed = false;
        r.detail = fmt("runtime %.2f s exceeds %.0f s", r.seconds, *c.budget_seconds);
    }
    return r;
}

std::vector<CriterionResult> run_criteria(const Options& opts, std::span<const int> only) {
    std::vector<CriterionResult> out;
    for (const Criterion& c : criteria()) {
        if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
        out.push_back(run_criterion(c, opts));
    }
    return out;
}

std::string format_result(const CriterionResult& r) {
    std::string line = fmt("%s  %d  %s  (%.2f s", r.passed ? "PASS" : "FAIL", r.id, r.title.c_str(), r.seconds);
    if (r.budget_seconds) line += fmt(", budget %.0f s", *r.budget_seconds);
    line += ")";
    if (!r.detail.empty()) line += ": " + r.detail;
    return line;
}

}  // namespace spinent::verify
