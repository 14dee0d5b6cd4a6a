#pragma once

#include <chrono>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "matro/catalog.hpp"
#include "matro/io.hpp"
#include "matro/order.hpp"
#include "matro/parallel.hpp"
#include "matro/rational.hpp"
#include "matro/tutte.hpp"

namespace matro {

struct GridPoint {
    Rational x, y;
    bool on_hyperbola = false; // x + y = xy exactly
    int expected_sign = 0;     // sgn(x + y - xy)

    GridPoint(Rational x_, Rational y_) : x(std::move(x_)), y(std::move(y_)) {
        Rational d = x + y - x * y;
        expected_sign = sign_of(d);
        on_hyperbola = expected_sign == 0;
    }

    std::string to_string() const { return format_rational(x) + " " + format_rational(y); }
};

struct Grid {
    std::string name = "default";
    std::vector<GridPoint> points;

    // Twelve rational points covering all three sign regimes of x+y-xy,
    // including the three exact hyperbola points (t, t/(t-1)).
    static Grid default_grid() {
        Grid g;
        auto add = [&g](long xn, long xd, long yn, long yd) {
            g.points.emplace_back(Rational(xn, xd), Rational(yn, yd));
        };
        add(1, 1, 1, 1);
        add(2, 1, 1, 1);
        add(1, 1, 2, 1);
        add(1, 2, 1, 2);
        add(1, 3, 3, 1);
        add(2, 1, 2, 1);  // hyperbola
        add(3, 2, 3, 1);  // hyperbola
        add(3, 1, 3, 2);  // hyperbola
        add(3, 1, 3, 1);
        add(4, 1, 2, 1);
        add(2, 1, 4, 1);
        add(10, 1, 10, 1);
        return g;
    }

    // One point per line: "xnum/xden ynum/yden" (integers allowed).
    static Grid parse(std::istream& is, const std::string& name = "file") {
        Grid g;
        g.name = name;
        std::string line;
        int lineno = 0;
        while (std::getline(is, line)) {
            ++lineno;
            if (line.empty() || line[0] == '#') continue;
            std::istringstream ls(line);
            std::string xt, yt, extra;
            if (!(ls >> xt >> yt) || (ls >> extra))
                throw ParseError(lineno, "expected 'x y' rational pair");
            Rational x = parse_rational(xt), y = parse_rational(yt);
            if (x <= 0 || y <= 0) throw ParseError(lineno, "grid points must be positive");
            g.points.emplace_back(x, y);
        }
        if (g.points.empty()) throw ParseError(lineno, "grid file lists no points");
        return g;
    }
};

struct Failure {
    std::vector<std::string> matroids;
    std::string point;
    std::string expected, actual;
};

struct VerificationReport {
    std::string suite;
    int n_max = 0;
    std::string grid_name;
    std::vector<std::string> grid_points;
    std::uint64_t instances = 0;
    std::vector<Failure> failures;
    std::int64_t elapsed_ms = 0;

    bool passed() const { return failures.empty(); }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["suite"] = suite;
        j["n"] = n_max;
        j["grid"] = grid_points;
        j["instances"] = instances;
        j["failures"] = nlohmann::json::array();
        for (const Failure& f : failures) {
            nlohmann::json jf;
            jf["matroids"] = f.matroids;
            jf["point"] = f.point;
            jf["expected"] = f.expected;
            jf["actual"] = f.actual;
            j["failures"].push_back(jf);
        }
        j["elapsed_ms"] = elapsed_ms;
        return j;
    }
};

struct VerifyOptions {
    int n_max = 6;
    unsigned jobs = 0; // 0 = hardware default
    std::uint64_t seed = 42;
    std::size_t max_recorded_failures = 10000;

    unsigned effective_jobs() const { return jobs == 0 ? default_jobs() : jobs; }
};

// Supplies catalogs to the suites; the corruption hook for harness
// sensitivity tests swaps entries in memory (catalog files reject invalid
// blocks at parse time, so a corrupt catalog cannot round-trip through disk).
class CatalogSource {
public:
    virtual ~CatalogSource() = default;
    virtual std::vector<FamilyBits> labeled_bits(int n, int r) const {
        return brute_force_labeled_bits(n, r);
    }
    virtual std::vector<Matroid> representatives(int n) const {
        return generate_representatives(n).entries;
    }
};

class CorruptedSource : public CatalogSource {
public:
    // Replaces the bases family at `index` within labeled class (n, r).
    CorruptedSource(int n, int r, std::size_t index, FamilyBits replacement)
        : n_(n), r_(r), index_(index), replacement_(replacement) {}

    std::vector<FamilyBits> labeled_bits(int n, int r) const override {
        auto fams = CatalogSource::labeled_bits(n, r);
        if (n == n_ && r == r_ && index_ < fams.size()) fams[index_] = replacement_;
        return fams;
    }

private:
    int n_, r_;
    std::size_t index_;
    FamilyBits replacement_;
};

namespace detail {

using Clock = std::chrono::steady_clock;

inline std::int64_t ms_since(Clock::time_point t0) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count();
}

// Values of T(M; x, y) at grid points, scaled by q_x^r q_y^(n-r) so that all
// matroids of one (n, r) class share the scale: comparisons and signs carry
// over exactly, with integer arithmetic only.
struct PointWeights {
    // w[i][j] multiplies the count of subsets with corank i, nullity j
    std::vector<BigInt> w;
    int rows = 0, cols = 0;
    BigInt monomial; // x^r y^(n-r) at the same scale
};

inline PointWeights point_weights(int r, int nul, const GridPoint& p) {
    PointWeights pw;
    pw.rows = r + 1;
    pw.cols = nul + 1;
    const BigInt px = numerator(p.x), qx = denominator(p.x);
    const BigInt py = numerator(p.y), qy = denominator(p.y);
    std::vector<BigInt> xm(r + 1), yn(nul + 1);
    for (int i = 0; i <= r; ++i) xm[i] = bigint_pow(px - qx, i) * bigint_pow(qx, r - i);
    for (int j = 0; j <= nul; ++j) yn[j] = bigint_pow(py - qy, j) * bigint_pow(qy, nul - j);
    pw.w.resize(std::size_t(r + 1) * (nul + 1));
    for (int i = 0; i <= r; ++i)
        for (int j = 0; j <= nul; ++j) pw.w[std::size_t(i) * (nul + 1) + j] = xm[i] * yn[j];
    pw.monomial = bigint_pow(px, r) * bigint_pow(py, nul);
    return pw;
}

inline BigInt scaled_grid_value(const std::vector<std::int64_t>& counts, const PointWeights& pw) {
    BigInt v = 0;
    for (std::size_t k = 0; k < counts.size(); ++k)
        if (counts[k] != 0) v += BigInt(counts[k]) * pw.w[k];
    return v;
}

struct SuiteRun {
    VerificationReport report;
    Clock::time_point t0 = Clock::now();
    std::mutex mu;
    const VerifyOptions* opts = nullptr;

    SuiteRun(std::string name, const Grid& grid, const VerifyOptions& o) {
        report.suite = std::move(name);
        report.n_max = o.n_max;
        report.grid_name = grid.name;
        for (const GridPoint& p : grid.points) report.grid_points.push_back(p.to_string());
        opts = &o;
    }

    void add(std::uint64_t instances, std::vector<Failure>&& fails) {
        std::lock_guard<std::mutex> lock(mu);
        report.instances += instances;
        for (Failure& f : fails)
            if (report.failures.size() < opts->max_recorded_failures)
                report.failures.push_back(std::move(f));
    }

    VerificationReport finish() {
        // parallel workers append in scheduling order; sort for reproducibility
        std::sort(report.failures.begin(), report.failures.end(),
                  [](const Failure& a, const Failure& b) {
                      return std::tie(a.matroids, a.point, a.expected, a.actual) <
                             std::tie(b.matroids, b.point, b.expected, b.actual);
                  });
        report.elapsed_ms = ms_since(t0);
        return std::move(report);
    }
};

struct LabeledEntry {
    FamilyBits fam = 0;
    Matroid m;
    std::vector<BigInt> grid_vals; // scaled T at each grid point
    bool has_loops = false, has_coloops = false;
};

// Materialize a labeled class with per-entry grid values.
inline std::vector<LabeledEntry> materialize_class(const CatalogSource& source, int n, int r,
                                                   const Grid& grid, unsigned jobs) {
    const auto& universe = subset_universe(n, r);
    auto fams = source.labeled_bits(n, r);
    std::vector<PointWeights> weights;
    weights.reserve(grid.points.size());
    for (const GridPoint& p : grid.points) weights.push_back(point_weights(r, n - r, p));
    std::vector<LabeledEntry> entries(fams.size());
    parallel_for(fams.size(), jobs, [&](std::size_t i) {
        LabeledEntry e;
        e.fam = fams[i];
        e.m = Matroid::from_bases_unchecked(n, family_masks(universe, fams[i]));
        auto counts = corank_nullity_counts(e.m);
        for (const PointWeights& pw : weights) e.grid_vals.push_back(scaled_grid_value(counts, pw));
        e.has_loops = e.m.loops() != 0;
        e.has_coloops = e.m.coloops() != 0;
        entries[i] = std::move(e);
    });
    return entries;
}

// All ordered proper-containment pairs within one labeled class; fn(i, j)
// runs with bases(entries[j]) ⊊ bases(entries[i]).
template <class Fn>
void scan_weak_pairs(const std::vector<LabeledEntry>& entries, unsigned jobs, Fn&& fn) {
    parallel_for(entries.size(), jobs, [&](std::size_t i) {
        const FamilyBits fi = entries[i].fam;
        for (std::size_t j = 0; j < entries.size(); ++j) {
            const FamilyBits fj = entries[j].fam;
            if (fj == fi || (fj & ~fi) != 0) continue;
            fn(i, j);
        }
    });
}

struct FreerPair {
    int f, g;
};

inline std::vector<FreerPair> freer_pairs(const Matroid& m) {
    std::vector<FreerPair> out;
    for (int f = 0; f < m.size(); ++f)
        for (int g = 0; g < m.size(); ++g) {
            if (f == g) continue;
            if (freer_than(m, f, g).freer) out.push_back({f, g});
        }
    return out;
}

// Deletes every element of E - {f,g} parallel to g (a 2-circuit with g);
// returns the stripped matroid with the tracked images of f and g.
struct StrippedPair {
    Matroid m;
    int f, g;
};

inline StrippedPair strip_parallel_to(const Matroid& m, int f, int g) {
    Mask drop = 0;
    for (Mask c : m.circuits())
        if (popcount(c) == 2 && has_bit(c, g)) drop |= static_cast<Mask>(c ^ bit(g));
    drop &= static_cast<Mask>(~(bit(f) | bit(g)));
    Minor minor = delete_elements(m, drop);
    return StrippedPair{minor.m, minor.old_to_new[f], minor.old_to_new[g]};
}

inline StrippedPair contract_series_with(const Matroid& m, int f, int g) {
    Matroid d = dual(m);
    Mask drop = 0;
    for (Mask c : d.circuits())
        if (popcount(c) == 2 && has_bit(c, f)) drop |= static_cast<Mask>(c ^ bit(f));
    drop &= static_cast<Mask>(~(bit(f) | bit(g)));
    Minor minor = contract_elements(m, drop);
    return StrippedPair{minor.m, minor.old_to_new[f], minor.old_to_new[g]};
}

inline std::string describe_pair(int f, int g) {
    return "f=" + std::to_string(f) + " g=" + std::to_string(g);
}

} // namespace detail

// ---------------------------------------------------------------------------
// Suite: main theorem. For identity weak pairs (bases(N) ⊊ bases(M), equal
// rank), sgn(T(M)-T(N)) must equal sgn(x+y-xy) at every grid point. Proper
// containment forces M ≇ N, so no isomorphism exemption applies. For
// n_max = 7, representatives are spot-checked through seeded relabelings of
// single-basis-removal images.
inline VerificationReport suite_main_theorem(const CatalogSource& source, const Grid& grid,
                                             const VerifyOptions& opts) {
    detail::SuiteRun run("main", grid, opts);
    const unsigned jobs = opts.effective_jobs();
    for (int n = 2; n <= std::min(opts.n_max, kBruteForceMaxN); ++n) {
        for (int r = 0; r <= n; ++r) {
            auto entries = detail::materialize_class(source, n, r, grid, jobs);
            detail::scan_weak_pairs(entries, jobs, [&](std::size_t i, std::size_t j) {
                std::uint64_t inst = 0;
                std::vector<Failure> fails;
                for (std::size_t p = 0; p < grid.points.size(); ++p) {
                    ++inst;
                    int actual = sign_of(BigInt(entries[i].grid_vals[p] - entries[j].grid_vals[p]));
                    int expected = grid.points[p].expected_sign;
                    if (actual != expected)
                        fails.push_back(Failure{{matroid_to_string(entries[i].m),
                                                 matroid_to_string(entries[j].m)},
                                                grid.points[p].to_string(),
                                                std::to_string(expected), std::to_string(actual)});
                }
                run.add(inst, std::move(fails));
            });
        }
    }
    if (opts.n_max >= 7) {
        auto reps = source.representatives(7);
        std::mt19937_64 rng(opts.seed);
        for (const Matroid& rep : reps) {
            std::vector<int> perm(rep.size());
            std::iota(perm.begin(), perm.end(), 0);
            std::shuffle(perm.begin(), perm.end(), rng);
            std::vector<Mask> relabeled;
            detail::remap_sorted(rep.bases(), perm.data(), relabeled);
            Matroid m = Matroid::from_bases_unchecked(rep.size(), relabeled);
            TuttePoly tm = tutte_subset_expansion(m);
            for (std::size_t bi = 0; bi < m.bases().size(); ++bi) {
                std::vector<Mask> sub = m.bases();
                sub.erase(sub.begin() + bi);
                if (sub.empty() || Matroid::find_exchange_violation(sub)) continue;
                Matroid nsub = Matroid::from_bases_unchecked(m.size(), sub);
                TuttePoly tn = tutte_subset_expansion(nsub);
                std::uint64_t inst = 0;
                std::vector<Failure> fails;
                for (const GridPoint& p : grid.points) {
                    ++inst;
                    int actual = sign_compare(tm, tn, p.x, p.y);
                    if (actual != p.expected_sign)
                        fails.push_back(Failure{{matroid_to_string(m), matroid_to_string(nsub)},
                                                p.to_string(), std::to_string(p.expected_sign),
                                                std::to_string(actual)});
                }
                run.add(inst, std::move(fails));
            }
        }
    }
    return run.finish();
}

// ---------------------------------------------------------------------------
// Suite: Lucas theorem, items (i)-(v) on weak pairs: strict inequalities at
// (1,1), (2,1), (1,2); axis inequalities T(M;x,0) >= T(N;x,0) when M is
// loopless and T(M;0,y) >= T(N;0,y) when M is coloop-free.
inline VerificationReport suite_lucas(const CatalogSource& source, const Grid& grid,
                                      const VerifyOptions& opts) {
    detail::SuiteRun run("lucas", grid, opts);
    const unsigned jobs = opts.effective_jobs();
    static const std::array<Rational, 4> axis_samples = {Rational(1, 2), Rational(1), Rational(2),
                                                         Rational(3)};
    Grid strict_grid;
    strict_grid.points.emplace_back(Rational(1), Rational(1));
    strict_grid.points.emplace_back(Rational(2), Rational(1));
    strict_grid.points.emplace_back(Rational(1), Rational(2));
    for (int n = 2; n <= std::min(opts.n_max, kBruteForceMaxN); ++n) {
        for (int r = 0; r <= n; ++r) {
            auto entries = detail::materialize_class(source, n, r, strict_grid, jobs);
            // per-entry axis values T(M;x,0) scaled by q^r and T(M;0,y)
            // scaled by q^(n-r); one scale per class, so pairs compare raw
            std::vector<std::array<BigInt, 8>> axis(entries.size());
            parallel_for(entries.size(), jobs, [&](std::size_t i) {
                TuttePoly t = tutte_subset_expansion(entries[i].m);
                for (int s = 0; s < 4; ++s) {
                    const BigInt p = numerator(axis_samples[s]), q = denominator(axis_samples[s]);
                    BigInt vx = 0, vy = 0;
                    for (int d = 0; d <= r; ++d)
                        vx += t.get(d, 0) * bigint_pow(p, d) * bigint_pow(q, r - d);
                    for (int d = 0; d <= n - r; ++d)
                        vy += t.get(0, d) * bigint_pow(p, d) * bigint_pow(q, n - r - d);
                    axis[i][s] = vx;
                    axis[i][4 + s] = vy;
                }
            });
            static const char* names[3] = {"T(1,1)", "T(2,1)", "T(1,2)"};
            detail::scan_weak_pairs(entries, jobs, [&](std::size_t i, std::size_t j) {
                std::uint64_t inst = 0;
                std::vector<Failure> fails;
                auto witness = [&](const std::string& exp, const std::string& act) {
                    fails.push_back(Failure{{matroid_to_string(entries[i].m),
                                             matroid_to_string(entries[j].m)},
                                            "", exp, act});
                };
                for (int p = 0; p < 3; ++p) {
                    ++inst;
                    if (entries[i].grid_vals[p] <= entries[j].grid_vals[p])
                        witness(std::string(names[p]) + " strictly larger",
                                entries[i].grid_vals[p].str() + " vs " +
                                    entries[j].grid_vals[p].str());
                }
                if (!entries[i].has_loops) {
                    for (int s = 0; s < 4; ++s) {
                        ++inst;
                        if (axis[i][s] < axis[j][s])
                            witness("T(M;" + format_rational(axis_samples[s]) + ",0) >= T(N;...)",
                                    axis[i][s].str() + " < " + axis[j][s].str());
                    }
                }
                if (!entries[i].has_coloops) {
                    for (int s = 0; s < 4; ++s) {
                        ++inst;
                        if (axis[i][4 + s] < axis[j][4 + s])
                            witness("T(M;0," + format_rational(axis_samples[s]) + ") >= T(N;...)",
                                    axis[i][4 + s].str() + " < " + axis[j][4 + s].str());
                    }
                }
                run.add(inst, std::move(fails));
            });
        }
    }
    return run.finish();
}

// ---------------------------------------------------------------------------
// Suite: loop/coloop lemma. For every matroid with |E| >= 2 of rank k and
// nullity m: when M is a single-basis matroid (≅ U_{k,k} ⊕ U_{0,m}), T(M)
// equals the monomial x^k y^m exactly; otherwise sgn(T(M) - x^k y^m) equals
// sgn(x+y-xy) at every grid point.
inline VerificationReport suite_lemma_loop_coloop(const CatalogSource& source, const Grid& grid,
                                                  const VerifyOptions& opts) {
    detail::SuiteRun run("lemma-lc", grid, opts);
    const unsigned jobs = opts.effective_jobs();
    for (int n = 2; n <= std::min(opts.n_max, kBruteForceMaxN); ++n) {
        for (int r = 0; r <= n; ++r) {
            std::vector<detail::PointWeights> weights;
            for (const GridPoint& p : grid.points) weights.push_back(detail::point_weights(r, n - r, p));
            auto entries = detail::materialize_class(source, n, r, grid, jobs);
            parallel_for(entries.size(), jobs, [&](std::size_t i) {
                const auto& e = entries[i];
                std::uint64_t inst = 0;
                std::vector<Failure> fails;
                if (e.m.bases().size() == 1) {
                    ++inst;
                    TuttePoly t = tutte_subset_expansion(e.m);
                    TuttePoly mono(r + 1, n - r + 1);
                    mono.at(r, n - r) = 1;
                    if (!(t == mono))
                        fails.push_back(Failure{{matroid_to_string(e.m)},
                                                "",
                                                "T = x^k y^m exactly",
                                                "coefficients differ"});
                } else {
                    for (std::size_t p = 0; p < grid.points.size(); ++p) {
                        ++inst;
                        int actual = sign_of(BigInt(e.grid_vals[p] - weights[p].monomial));
                        if (actual != grid.points[p].expected_sign)
                            fails.push_back(Failure{{matroid_to_string(e.m)},
                                                    grid.points[p].to_string(),
                                                    std::to_string(grid.points[p].expected_sign),
                                                    std::to_string(actual)});
                    }
                }
                run.add(inst, std::move(fails));
            });
        }
    }
    return run.finish();
}

// ---------------------------------------------------------------------------
// Suite: freedom corollaries. For every freer pair (f, g):
//   - g not a loop:   M/f vs M/g obeys the sign law unless isomorphic (equal
//                     polynomials when isomorphic)
//   - f not a coloop: M\f vs M\g obeys the reversed sign law unless
//                     isomorphic (the proviso the dual derivation needs: a
//                     coloop f with a loop g is freer yet violates the law)
//   - counting: b(f)>=b(g); W_k(f)>=W_k(g) and h(f)>=h(g) for g not a loop;
//     γ(f)>=γ(g) for f not a coloop; γ'(f)>=γ'(g) for f not a coloop.
inline VerificationReport suite_freedom_corollaries(const CatalogSource& source, const Grid& grid,
                                                    const VerifyOptions& opts) {
    detail::SuiteRun run("freedom", grid, opts);
    const unsigned jobs = opts.effective_jobs();
    for (int n = 2; n <= std::min(opts.n_max, kBruteForceMaxN); ++n) {
        for (int r = 0; r <= n; ++r) {
            const auto& universe = subset_universe(n, r);
            auto fams = source.labeled_bits(n, r);
            parallel_for(fams.size(), jobs, [&](std::size_t idx) {
                Matroid m = Matroid::from_bases_unchecked(n, family_masks(universe, fams[idx]));
                std::uint64_t inst = 0;
                std::vector<Failure> fails;
                auto fail = [&](const std::string& pt, const std::string& exp, const std::string& act) {
                    fails.push_back(Failure{{matroid_to_string(m)}, pt, exp, act});
                };
                for (auto [f, g] : detail::freer_pairs(m)) {
                    const std::string fg = detail::describe_pair(f, g);
                    if (!m.is_loop(g)) {
                        Matroid mf = contract_elements(m, bit(f)).m;
                        Matroid mg = contract_elements(m, bit(g)).m;
                        TuttePoly tf = tutte_subset_expansion(mf);
                        TuttePoly tg = tutte_subset_expansion(mg);
                        if (is_isomorphic(mf, mg)) {
                            ++inst;
                            if (!(tf == tg)) fail("", fg + ": T(M/f) = T(M/g)", "polynomials differ");
                        } else {
                            for (const GridPoint& p : grid.points) {
                                ++inst;
                                int actual = sign_compare(tf, tg, p.x, p.y);
                                if (actual != p.expected_sign)
                                    fail(p.to_string(), fg + ": contraction sign " +
                                                            std::to_string(p.expected_sign),
                                         std::to_string(actual));
                            }
                        }
                    }
                    if (!m.is_coloop(f)) {
                        Matroid mf = delete_elements(m, bit(f)).m;
                        Matroid mg = delete_elements(m, bit(g)).m;
                        TuttePoly tf = tutte_subset_expansion(mf);
                        TuttePoly tg = tutte_subset_expansion(mg);
                        if (is_isomorphic(mf, mg)) {
                            ++inst;
                            if (!(tf == tg)) fail("", fg + ": T(M\\f) = T(M\\g)", "polynomials differ");
                        } else {
                            for (const GridPoint& p : grid.points) {
                                ++inst;
                                int actual = sign_compare(tf, tg, p.x, p.y);
                                if (actual != -p.expected_sign)
                                    fail(p.to_string(), fg + ": deletion sign " +
                                                            std::to_string(-p.expected_sign),
                                         std::to_string(actual));
                            }
                        }
                    }
                    ++inst;
                    if (b_through(m, f) < b_through(m, g))
                        fail("", fg + ": b(f) >= b(g)",
                             std::to_string(b_through(m, f)) + " < " + std::to_string(b_through(m, g)));
                    if (!m.is_loop(g)) {
                        for (int k = 0; k <= r; ++k) {
                            ++inst;
                            if (flats_k_through(m, f, k) < flats_k_through(m, g, k))
                                fail("", fg + ": W_" + std::to_string(k) + "(f) >= W_k(g)",
                                     std::to_string(flats_k_through(m, f, k)) + " < " +
                                         std::to_string(flats_k_through(m, g, k)));
                        }
                        ++inst;
                        if (h_through(m, f) < h_through(m, g))
                            fail("", fg + ": h(f) >= h(g)", "violated");
                    }
                    if (!m.is_coloop(f)) {
                        ++inst;
                        if (circuits_through(m, f) < circuits_through(m, g))
                            fail("", fg + ": gamma(f) >= gamma(g)", "violated");
                        ++inst;
                        if (spanning_circuits_through(m, f) < spanning_circuits_through(m, g))
                            fail("", fg + ": gamma'(f) >= gamma'(g)", "violated");
                    }
                }
                run.add(inst, std::move(fails));
            });
        }
    }
    return run.finish();
}

// ---------------------------------------------------------------------------
// Suite: equality characterizations over freer pairs (f, g):
//   (a) b(f)=b(g)      iff f,g clones in M
//   (b) h(f)=h(g)      iff clones in M minus the elements parallel to g
//   (c) γ(f)=γ(g)      iff clones in M with the elements in series with f
//                      contracted
//   (d) W_{r-2} equality iff clones in the g-parallel-stripped truncation
//   (e) W_k equality (1<=k<=r-1) iff clones in the stripped τ^{r-k-1}(M)
inline VerificationReport suite_equality_characterizations(const CatalogSource& source,
                                                           const Grid& grid,
                                                           const VerifyOptions& opts) {
    detail::SuiteRun run("equality", grid, opts);
    const unsigned jobs = opts.effective_jobs();

    auto check_matroid = [&](const Matroid& m) {
        std::uint64_t inst = 0;
        std::vector<Failure> fails;
        const int r = m.rank();
        auto fail = [&](const std::string& what, const std::string& exp, const std::string& act) {
            fails.push_back(Failure{{matroid_to_string(m)}, "", what + ": " + exp, act});
        };
        auto clones_in = [](const detail::StrippedPair& sp) {
            return are_clones(sp.m, sp.f, sp.g);
        };
        // τ^i(M) chain built on demand: chain[i] = τ^i(M)
        std::vector<Matroid> chain = {m};
        auto truncated = [&](int i) -> const Matroid& {
            while (static_cast<int>(chain.size()) <= i) chain.push_back(truncation(chain.back()));
            return chain[i];
        };
        for (auto [f, g] : detail::freer_pairs(m)) {
            const std::string fg = detail::describe_pair(f, g);
            ++inst;
            {
                bool beq = b_through(m, f) == b_through(m, g);
                bool cl = are_clones(m, f, g);
                if (beq != cl)
                    fail(fg + " (a)", "b-equality iff clones",
                         std::string(beq ? "equal" : "unequal") + " counts, " +
                             (cl ? "clones" : "not clones"));
            }
            ++inst;
            {
                bool heq = h_through(m, f) == h_through(m, g);
                bool cl = clones_in(detail::strip_parallel_to(m, f, g));
                if (heq != cl)
                    fail(fg + " (b)", "h-equality iff clones in stripped M",
                         std::string(heq ? "equal" : "unequal") + " counts, " +
                             (cl ? "clones" : "not clones"));
            }
            ++inst;
            {
                bool geq = circuits_through(m, f) == circuits_through(m, g);
                bool cl = clones_in(detail::contract_series_with(m, f, g));
                if (geq != cl)
                    fail(fg + " (c)", "gamma-equality iff clones in series-contracted M",
                         std::string(geq ? "equal" : "unequal") + " counts, " +
                             (cl ? "clones" : "not clones"));
            }
            if (r >= 2) {
                ++inst;
                {
                    bool weq = flats_k_through(m, f, r - 2) == flats_k_through(m, g, r - 2);
                    bool cl = clones_in(detail::strip_parallel_to(truncated(1), f, g));
                    if (weq != cl)
                        fail(fg + " (d)", "W_{r-2}-equality iff clones in stripped truncation",
                             std::string(weq ? "equal" : "unequal") + " counts, " +
                                 (cl ? "clones" : "not clones"));
                }
                for (int k = 1; k <= r - 1; ++k) {
                    ++inst;
                    bool weq = flats_k_through(m, f, k) == flats_k_through(m, g, k);
                    bool cl = clones_in(detail::strip_parallel_to(truncated(r - k - 1), f, g));
                    if (weq != cl)
                        fail(fg + " (e) k=" + std::to_string(k),
                             "W_k-equality iff clones in stripped iterated truncation",
                             std::string(weq ? "equal" : "unequal") + " counts, " +
                                 (cl ? "clones" : "not clones"));
                }
            }
        }
        return std::make_pair(inst, std::move(fails));
    };

    for (int n = 2; n <= std::min(opts.n_max, kBruteForceMaxN); ++n) {
        for (int r = 0; r <= n; ++r) {
            const auto& universe = subset_universe(n, r);
            auto fams = source.labeled_bits(n, r);
            parallel_for(fams.size(), jobs, [&](std::size_t idx) {
                auto [inst, fails] =
                    check_matroid(Matroid::from_bases_unchecked(n, family_masks(universe, fams[idx])));
                run.add(inst, std::move(fails));
            });
        }
    }
    if (opts.n_max >= 7) {
        auto reps = source.representatives(7);
        parallel_for(reps.size(), opts.effective_jobs(), [&](std::size_t idx) {
            auto [inst, fails] = check_matroid(reps[idx]);
            run.add(inst, std::move(fails));
        });
    }
    return run.finish();
}

// ---------------------------------------------------------------------------
// Suite: structural lemmas under one report:
//   - φ_{gf} is a rank-preserving weak map M/f -> M/g (f freer, g not a loop)
//   - duality: identity weak pairs dualize to identity weak pairs
//   - restriction lemma: f freer than g iff b(f;N) >= b(g;N) for every
//     restriction N containing f and g
//   - relaxation identity: T(relaxed) - T(M) = x + y - xy exactly
//   - hyperbola identity at t in {3/2, 2, 3}
inline VerificationReport suite_structural_lemmas(const CatalogSource& source, const Grid& grid,
                                                  const VerifyOptions& opts) {
    detail::SuiteRun run("structural", grid, opts);
    const unsigned jobs = opts.effective_jobs();
    static const std::array<Rational, 3> hyper_ts = {Rational(3, 2), Rational(2), Rational(3)};

    for (int n = 1; n <= std::min(opts.n_max, kBruteForceMaxN); ++n) {
        for (int r = 0; r <= n; ++r) {
            const auto& universe = subset_universe(n, r);
            auto fams = source.labeled_bits(n, r);

            parallel_for(fams.size(), jobs, [&](std::size_t idx) {
                Matroid m = Matroid::from_bases_unchecked(n, family_masks(universe, fams[idx]));
                std::uint64_t inst = 0;
                std::vector<Failure> fails;
                auto fail = [&](const std::string& what, const std::string& exp,
                                const std::string& act) {
                    fails.push_back(Failure{{matroid_to_string(m)}, "", what + ": " + exp, act});
                };

                // φ_{gf} weak maps
                for (auto [f, g] : detail::freer_pairs(m)) {
                    if (m.is_loop(g)) continue;
                    ++inst;
                    if (!phi_gf_check(m, f, g))
                        fail("phi_gf " + detail::describe_pair(f, g),
                             "rank-preserving weak map M/f -> M/g", "not a weak map");
                }

                // restriction lemma, all ordered pairs
                if (n >= 2) {
                    std::vector<std::array<std::int64_t, kMaxGroundSet>> b_restr(std::size_t(1) << n);
                    for (std::uint32_t x = 0; x < (1u << n); ++x) {
                        auto& row = b_restr[x];
                        row.fill(0);
                        const Mask xm = static_cast<Mask>(x);
                        const int rx = m.rank_of(xm);
                        Mask sub = xm;
                        for (;;) {
                            if (popcount(sub) == rx && m.is_independent(sub))
                                for (Mask rest = sub; rest;) {
                                    int e = lowest_bit(rest);
                                    rest &= rest - 1;
                                    ++row[e];
                                }
                            if (sub == 0) break;
                            sub = static_cast<Mask>((sub - 1) & xm);
                        }
                    }
                    for (int f = 0; f < n; ++f)
                        for (int g = 0; g < n; ++g) {
                            if (f == g) continue;
                            ++inst;
                            bool freer = freer_than(m, f, g).freer;
                            bool all_restr = true;
                            for (std::uint32_t x = 0; x < (1u << n); ++x) {
                                if (!has_bit(static_cast<Mask>(x), f) ||
                                    !has_bit(static_cast<Mask>(x), g))
                                    continue;
                                if (b_restr[x][f] < b_restr[x][g]) {
                                    all_restr = false;
                                    break;
                                }
                            }
                            if (freer != all_restr)
                                fail("restriction lemma " + detail::describe_pair(f, g),
                                     "freer iff all restriction basis counts dominate",
                                     freer ? "freer but a restriction fails"
                                           : "not freer but all restrictions dominate");
                        }
                }

                // relaxation identity
                {
                    auto hp = m.hyperplanes();
                    for (Mask c : m.circuits()) {
                        if (!std::binary_search(hp.begin(), hp.end(), c)) continue;
                        ++inst;
                        Matroid relaxed = relax(m, c);
                        TuttePoly diff = tutte_subset_expansion(relaxed) - tutte_subset_expansion(m);
                        TuttePoly expected(2, 2);
                        expected.at(1, 0) = 1;
                        expected.at(0, 1) = 1;
                        expected.at(1, 1) = -1;
                        if (!(diff == expected))
                            fail("relaxation of " + ElementSet::mask_to_string(c),
                                 "T(relaxed) - T(M) = x + y - xy", "difference polynomial differs");
                    }
                }

                // hyperbola identity
                for (const Rational& t : hyper_ts) {
                    ++inst;
                    if (!hyperbola_check(m, t))
                        fail("hyperbola t=" + format_rational(t), "T(M;t,t/(t-1)) = (t-1)^r y^n",
                             "values differ");
                }

                run.add(inst, std::move(fails));
            });

            // dual weak-map lemma over weak pairs
            if (n >= 2) {
                auto entries = detail::materialize_class(source, n, r, grid, jobs);
                std::vector<Matroid> duals(entries.size());
                parallel_for(entries.size(), jobs,
                             [&](std::size_t i) { duals[i] = dual(entries[i].m); });
                detail::scan_weak_pairs(entries, jobs, [&](std::size_t i, std::size_t j) {
                    std::vector<Failure> fails;
                    if (!identity_is_rp_weak_map(duals[i], duals[j]))
                        fails.push_back(Failure{{matroid_to_string(entries[i].m),
                                                 matroid_to_string(entries[j].m)},
                                                "", "identity weak map dualizes", "dual pair fails"});
                    run.add(1, std::move(fails));
                });
            }
        }
    }
    return run.finish();
}

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {"main",     "lucas",    "lemma-lc",
                                                   "freedom",  "equality", "structural"};
    return names;
}

inline VerificationReport run_suite(const std::string& name, const CatalogSource& source,
                                    const Grid& grid, const VerifyOptions& opts) {
    if (name == "main") return suite_main_theorem(source, grid, opts);
    if (name == "lucas") return suite_lucas(source, grid, opts);
    if (name == "lemma-lc") return suite_lemma_loop_coloop(source, grid, opts);
    if (name == "freedom") return suite_freedom_corollaries(source, grid, opts);
    if (name == "equality") return suite_equality_characterizations(source, grid, opts);
    if (name == "structural") return suite_structural_lemmas(source, grid, opts);
    throw BoundsViolatedError("unknown suite '" + name + "'");
}

} // namespace matro
