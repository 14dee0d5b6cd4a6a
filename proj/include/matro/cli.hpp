#pragma once

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "matro/catalog.hpp"
#include "matro/constructions.hpp"
#include "matro/io.hpp"
#include "matro/order.hpp"
#include "matro/tutte.hpp"
#include "matro/verify.hpp"

namespace matro::cli {

// Exit codes: 0 success / all suites pass, 1 verification failures or method
// disagreement (report still written), 2 usage or parse errors. Diagnostics
// go to the error stream, data to the output stream.

namespace detail {

inline Matroid read_matroid_file(const std::string& path, std::istream& in) {
    if (path == "-") return read_matroid(in);
    std::ifstream f(path);
    if (!f) throw Error("cannot open file: " + path);
    return read_matroid(f);
}

inline Grid load_grid(const std::string& spec) {
    if (spec == "default") return Grid::default_grid();
    std::ifstream f(spec);
    if (!f) throw Error("cannot open grid file: " + spec);
    return Grid::parse(f, spec);
}

inline TutteCache make_cache() {
    if (const char* dir = std::getenv("MATRO_CACHE_DIR"); dir && *dir)
        return TutteCache(std::filesystem::path(dir));
    return TutteCache();
}

inline void print_poly(std::ostream& out, const TuttePoly& t) {
    out << "# rows = x-degree 0.." << (t.rows - 1) << ", cols = y-degree 0.." << (t.cols - 1)
        << '\n';
    for (int i = 0; i < t.rows; ++i) {
        for (int j = 0; j < t.cols; ++j) out << (j ? " " : "") << t.at(i, j).str();
        out << '\n';
    }
}

inline nlohmann::json labels_json(const std::map<int, std::string>& labels) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [idx, name] : labels) j[std::to_string(idx)] = name;
    return j;
}

} // namespace detail

inline int run(std::vector<std::string> args, std::istream& in, std::ostream& out,
               std::ostream& err) {
    CLI::App app{"matro: exact matroid computations, Tutte polynomials, and theorem sweeps"};
    app.require_subcommand(1);
    unsigned jobs = 0;
    app.add_option("--jobs", jobs, "worker pool size (default: machine parallelism)");

    // validate
    std::string v_file;
    auto* sc_validate = app.add_subcommand("validate", "check a bases family for basis exchange");
    sc_validate->add_option("file", v_file, "matroid file ('-' for stdin)")->required();

    // tutte
    std::string t_file, t_method = "delcon";
    std::vector<std::string> t_at;
    bool t_stats = false;
    auto* sc_tutte = app.add_subcommand("tutte", "Tutte polynomial and exact evaluations");
    sc_tutte->add_option("file", t_file)->required();
    sc_tutte->add_option("--at", t_at, "evaluation point X Y (rationals p/q); repeatable")
        ->expected(2)
        ->allow_extra_args(false);
    sc_tutte->add_option("--method", t_method, "delcon|subset|both")
        ->check(CLI::IsMember({"delcon", "subset", "both"}));
    sc_tutte->add_flag("--stats", t_stats, "print cache statistics to stderr");

    // compare
    std::string c_file1, c_file2, c_grid = "default";
    auto* sc_compare = app.add_subcommand("compare", "sign comparison of two matroids on a grid");
    sc_compare->add_option("file1", c_file1)->required();
    sc_compare->add_option("file2", c_file2)->required();
    sc_compare->add_option("--grid", c_grid, "default, or a grid file of 'x y' rational pairs");

    // freer
    std::string f_file;
    int f_f = 0, f_g = 0;
    auto* sc_freer = app.add_subcommand("freer", "is f freer than g?");
    sc_freer->add_option("file", f_file)->required();
    sc_freer->add_option("f", f_f)->required();
    sc_freer->add_option("g", f_g)->required();

    // clones
    std::string cl_file;
    auto* sc_clones = app.add_subcommand("clones", "list all clone pairs");
    sc_clones->add_option("file", cl_file)->required();

    // examples
    std::string e_name, e_labels_out;
    auto* sc_examples = app.add_subcommand("examples", "emit a named example matroid");
    sc_examples->add_option("name", e_name, "figure2|counterexample")
        ->required()
        ->check(CLI::IsMember({"figure2", "counterexample"}));
    sc_examples->add_option("--labels-out", e_labels_out, "write the label map JSON to a file");

    // catalog
    int g_n = 0;
    std::string g_mode = "labeled", g_out;
    auto* sc_catalog = app.add_subcommand("catalog", "generate matroid catalogs");
    sc_catalog->add_option("--n", g_n, "ground set size")->required();
    sc_catalog->add_option("--mode", g_mode, "labeled (n<=6) | repr (n<=7)")
        ->check(CLI::IsMember({"labeled", "repr"}));
    sc_catalog->add_option("--out", g_out, "output file (default stdout)");

    // verify
    std::string vf_suite = "all", vf_grid = "default", vf_report;
    int vf_n = 6;
    std::uint64_t vf_seed = 42;
    auto* sc_verify = app.add_subcommand("verify", "run theorem verification suites");
    sc_verify->add_option("--suite", vf_suite, "main|lucas|lemma-lc|freedom|equality|structural|all");
    sc_verify->add_option("--n", vf_n, "catalog bound (pair sweeps n<=6; 7 adds spot checks)");
    sc_verify->add_option("--grid", vf_grid, "default, or a grid file");
    sc_verify->add_option("--seed", vf_seed, "seed for the n=7 relabeling spot checks");
    sc_verify->add_option("--report", vf_report, "write the JSON report here");

    std::vector<const char*> argv;
    argv.push_back("matro");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) { // --help
            out << app.help();
            return 0;
        }
        err << "usage error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (*sc_validate) {
            Matroid m = detail::read_matroid_file(v_file, in);
            out << "valid matroid: n=" << m.size() << " r=" << m.rank()
                << " bases=" << m.bases().size() << '\n';
            return 0;
        }

        if (*sc_tutte) {
            Matroid m = detail::read_matroid_file(t_file, in);
            TutteCache cache = detail::make_cache();
            TuttePoly t;
            if (t_method == "subset") {
                t = tutte_subset_expansion(m);
            } else if (t_method == "delcon") {
                t = tutte_delcon(m, cache);
            } else {
                TuttePoly td = tutte_delcon(m, cache);
                TuttePoly ts = tutte_subset_expansion(m);
                if (!(td == ts)) {
                    err << "METHOD DISAGREEMENT: deletion-contraction and subset expansion "
                           "differ\n";
                    detail::print_poly(err, td);
                    detail::print_poly(err, ts);
                    return 1;
                }
                t = td;
            }
            detail::print_poly(out, t);
            for (std::size_t i = 0; i + 2 <= t_at.size(); i += 2) {
                Rational x = parse_rational(t_at[i]), y = parse_rational(t_at[i + 1]);
                out << "T(" << format_rational(x) << ", " << format_rational(y)
                    << ") = " << format_rational(evaluate(t, x, y)) << '\n';
            }
            if (t_stats) {
                auto s = cache.stats();
                err << "cache: lookups=" << s.lookups << " hits=" << s.hits
                    << " computed=" << s.computed << " disk_loads=" << s.disk_loads
                    << " hit_rate=" << s.hit_rate() << '\n';
            }
            return 0;
        }

        if (*sc_compare) {
            Matroid m = detail::read_matroid_file(c_file1, in);
            Matroid n = detail::read_matroid_file(c_file2, in);
            Grid grid = detail::load_grid(c_grid);
            bool same_ground = m.size() == n.size();
            bool weak_pair = same_ground && identity_is_rp_weak_map(m, n);
            bool equal_bases = same_ground && m.bases() == n.bases();
            out << "identity weak map M -> N: " << (weak_pair ? "yes" : "no")
                << (equal_bases ? " (equal matroids)" : "") << '\n';
            TuttePoly tm = tutte_subset_expansion(m), tn = tutte_subset_expansion(n);
            int violations = 0;
            for (const GridPoint& p : grid.points) {
                int actual = sign_compare(tm, tn, p.x, p.y);
                out << p.to_string() << "  T(M)=" << format_rational(evaluate(tm, p.x, p.y))
                    << "  T(N)=" << format_rational(evaluate(tn, p.x, p.y)) << "  sign=" << actual;
                if (weak_pair) {
                    int expected = equal_bases ? 0 : p.expected_sign;
                    out << "  expected=" << expected;
                    if (actual != expected) {
                        out << "  VIOLATION";
                        ++violations;
                    }
                }
                out << '\n';
            }
            return violations ? 1 : 0;
        }

        if (*sc_freer) {
            Matroid m = detail::read_matroid_file(f_file, in);
            FreerWitness w = freer_than(m, f_f, f_g);
            if (w.freer)
                out << f_f << " is freer than " << f_g << '\n';
            else
                out << f_f << " is not freer than " << f_g
                    << "; witness cyclic flat: " << w.witness->to_string() << '\n';
            return 0;
        }

        if (*sc_clones) {
            Matroid m = detail::read_matroid_file(cl_file, in);
            for (int a = 0; a < m.size(); ++a)
                for (int b = a + 1; b < m.size(); ++b)
                    if (are_clones(m, a, b)) out << a << ' ' << b << '\n';
            return 0;
        }

        if (*sc_examples) {
            NamedExample ex = e_name == "figure2" ? figure2_example() : counterexample_sec4();
            nlohmann::json labels = detail::labels_json(ex.labels);
            out << "# " << ex.name << '\n';
            out << "# labels " << labels.dump() << '\n';
            write_matroid(out, ex.m);
            if (!e_labels_out.empty()) {
                std::ofstream lf(e_labels_out);
                if (!lf) throw Error("cannot open file: " + e_labels_out);
                lf << labels.dump(2) << '\n';
            }
            return 0;
        }

        if (*sc_catalog) {
            Catalog cat = g_mode == "labeled" ? generate_labeled(g_n) : generate_representatives(g_n);
            if (g_out.empty()) {
                save(cat, out);
            } else {
                std::ofstream f(g_out);
                if (!f) throw Error("cannot open file: " + g_out);
                save(cat, f);
            }
            return 0;
        }

        if (*sc_verify) {
            Grid grid = detail::load_grid(vf_grid);
            VerifyOptions opts;
            opts.n_max = vf_n;
            opts.jobs = jobs;
            opts.seed = vf_seed;
            CatalogSource source;
            std::vector<std::string> selected;
            if (vf_suite == "all")
                selected = suite_names();
            else
                selected.push_back(vf_suite);
            nlohmann::json report = nlohmann::json::array();
            bool any_failed = false;
            for (const std::string& name : selected) {
                VerificationReport r = run_suite(name, source, grid, opts);
                any_failed |= !r.passed();
                out << "suite " << r.suite << ": " << r.instances << " instances, "
                    << r.failures.size() << " failures [" << (r.passed() ? "PASS" : "FAIL")
                    << "] (" << r.elapsed_ms << " ms)\n";
                report.push_back(r.to_json());
            }
            if (!vf_report.empty()) {
                std::ofstream f(vf_report);
                if (!f) throw Error("cannot open file: " + vf_report);
                f << report.dump(2) << '\n';
            }
            return any_failed ? 1 : 0;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}

inline int run(std::vector<std::string> args) {
    return run(std::move(args), std::cin, std::cout, std::cerr);
}

} // namespace matro::cli
