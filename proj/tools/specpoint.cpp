#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <iostream>
#include <string>

#include "specpoint/arith.hpp"
#include "specpoint/bounds.hpp"
#include "specpoint/cm.hpp"
#include "specpoint/parser.hpp"
#include "specpoint/poly.hpp"
#include "specpoint/solver.hpp"
#include "specpoint/verify.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace specpoint;

json coeff_list_desc(const std::vector<mpz_class>& ascending) {
    json arr = json::array();
    for (auto it = ascending.rbegin(); it != ascending.rend(); ++it) {
        if (mpz_fits_slong_p(it->get_mpz_t()) && mpz_sizeinbase(it->get_mpz_t(), 2) <= 52) {
            arr.push_back(it->get_si());
        } else {
            arr.push_back(it->get_str());
        }
    }
    return arr;
}

json unipoly_coeffs_desc(const poly::UniPoly& p) {
    std::vector<mpz_class> asc;
    for (int i = 0; i <= p.degree(); ++i) {
        const auto& c = p[i];
        if (c.get_den() != 1) {
            // Rational coefficients are emitted as strings.
            json arr = json::array();
            for (int k = p.degree(); k >= 0; --k) arr.push_back(p[k].get_str());
            return arr;
        }
        asc.push_back(c.get_num());
    }
    return coeff_list_desc(asc);
}

json ball_json(const ball::BallComplex& z) {
    json j;
    j["re"] = z.re.mid_d();
    j["im"] = z.im.mid_d();
    j["radius"] = z.re.rad_d() + z.im.rad_d();
    return j;
}

json bound_report_json(const bounds::BoundReport& r) {
    json j;
    j["a"] = r.a;
    j["n_candidates"] = r.n_candidates;
    j["n_cap"] = r.n_cap;
    j["delta_cap"] = r.delta_cap;
    return j;
}

json verify_report_json(const verify::VerifyReport& r) {
    json j;
    j["check"] = r.check_name;
    j["range"] = r.range;
    j["pass"] = r.pass();
    j["counterexamples"] = r.counterexamples;
    if (!r.notes.empty()) j["notes"] = r.notes;
    j["elapsed_seconds"] = r.elapsed_seconds;
    return j;
}

json solve_result_json(const solver::SolveResult& res) {
    json j;
    json curve;
    curve["poly"] = res.curve.f.str();
    curve["d"] = res.curve.d;
    curve["delta1"] = res.curve.delta1;
    curve["delta2"] = res.curve.delta2;
    curve["h"] = res.curve.h_f;
    curve["big_h"] = res.curve.big_h.get_str();
    j["curve"] = curve;
    j["bounds"] = bound_report_json(res.curve.bound);
    j["delta_cap_used"] = res.curve.effective_cap;
    j["delta_cap_overridden"] = res.curve.cap_overridden;
    json pts = json::array();
    for (const auto& r : res.reports) {
        json p;
        p["N"] = r.n;
        p["disc"] = r.disc.value;
        p["factor"] = unipoly_coeffs_desc(r.factor);
        p["exact"] = r.exact;
        json pairs = json::array();
        for (const auto& pr : r.pairs) {
            json q;
            q["lambda_exponent"] = pr.lambda_exponent;
            q["alpha"] = ball_json(pr.alpha);
            q["residual_radius"] = pr.residual_radius;
            pairs.push_back(q);
        }
        p["pairs"] = pairs;
        pts.push_back(p);
    }
    j["special_points"] = pts;
    json und = json::array();
    for (const auto& u : res.undecided) {
        json q;
        q["N"] = u.n;
        q["alpha"] = ball_json(u.enclosure);
        q["reason"] = u.reason;
        und.push_back(q);
    }
    j["undecided"] = und;
    return j;
}

void render_solve_table(const solver::SolveResult& res, std::ostream& os) {
    os << "curve: " << res.curve.f.str() << "\n";
    os << "degrees: (" << res.curve.delta1 << ", " << res.curve.delta2
       << "), H = " << res.curve.big_h.get_str() << "\n";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", res.curve.effective_cap);
    os << "delta cap: " << buf << (res.curve.cap_overridden ? " (override)" : "") << "\n";
    if (res.reports.empty()) {
        os << "no special points\n";
    } else {
        os << "  N      disc  factor\n";
        for (const auto& r : res.reports) {
            std::snprintf(buf, sizeof(buf), "%3llu  %8lld  ",
                          static_cast<unsigned long long>(r.n),
                          static_cast<long long>(r.disc.value));
            os << buf << r.factor.str("X") << "  (" << r.pairs.size() << " verified pairs)\n";
        }
    }
    if (!res.undecided.empty()) {
        os << res.undecided.size() << " undecided roots:\n";
        for (const auto& u : res.undecided)
            os << "  N=" << u.n << ": " << u.reason << "\n";
    }
}

int run(int argc, char** argv) {
    CLI::App app{"exact special-point solver for curves over the j-line times the unit circle"};
    app.require_subcommand(1);

    // bounds
    auto* sc_bounds = app.add_subcommand("bounds", "print the explicit bound report");
    int b_d = 1, b_dx = 1, b_dy = 1;
    double b_h = 0.0;
    sc_bounds->add_option("--d", b_d, "field degree [K:Q]")->required();
    sc_bounds->add_option("--dx", b_dx, "degree in X")->required();
    sc_bounds->add_option("--dy", b_dy, "degree in Y")->required();
    sc_bounds->add_option("--height", b_h, "logarithmic height h(F)")->required();

    // solve
    auto* sc_solve = app.add_subcommand("solve", "find all special points on a curve");
    std::string s_poly, s_field;
    double s_cap = 0.0;
    bool s_have_cap = false;
    std::uint64_t s_nmax = 0;
    bool s_json = false, s_table = false;
    int s_threads = 0;
    sc_solve->add_option("--poly", s_poly, "polynomial in X and Y (and T with --field)")->required();
    sc_solve->add_option("--field", s_field, "monic integer minimal polynomial in T");
    sc_solve->add_option("--delta-cap", s_cap, "override the discriminant cap")
        ->check(CLI::PositiveNumber)
        ->each([&](const std::string&) { s_have_cap = true; });
    sc_solve->add_option("--n-max", s_nmax, "only scan orders N up to this value");
    sc_solve->add_flag("--json", s_json, "machine-readable output (default)");
    sc_solve->add_flag("--table", s_table, "human-readable table output");
    sc_solve->add_option("--threads", s_threads, "worker threads (default: all cores)");

    // classpoly
    auto* sc_cp = app.add_subcommand("classpoly", "Hilbert class polynomial of a discriminant");
    std::int64_t cp_disc = -3;
    sc_cp->add_option("--disc", cp_disc, "negative discriminant, 0 or 1 mod 4")->required();

    // cyclo
    auto* sc_cy = app.add_subcommand("cyclo", "cyclotomic polynomial");
    std::uint64_t cy_n = 1;
    sc_cy->add_option("--n", cy_n, "index N (1 <= N <= 10^6)")->required();

    // verify
    auto* sc_ver = app.add_subcommand("verify", "run an independent verification battery");
    std::string v_check;
    std::uint64_t v_maxn = 10000;
    int v_trials = 100;
    sc_ver->add_option("--check", v_check, "unit-squares | n-bound | primorial | j-bound | liouville")
        ->required();
    sc_ver->add_option("--max-n", v_maxn, "range limit for the exhaustive checks");
    sc_ver->add_option("--trials", v_trials, "sample count for the randomized checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (sc_bounds->parsed()) {
            bounds::BoundReport r = bounds::compute_bounds({b_d, b_dx, b_dy, b_h});
            std::cout << bound_report_json(r).dump(2) << "\n";
            return 0;
        }
        if (sc_solve->parsed()) {
            solver::CurveInput in;
            cli::ParsedPoly pp = cli::parse_poly(s_poly);
            if (!s_field.empty()) {
                poly::NumberFieldSpec k;
                k.min_poly = cli::parse_poly(s_field).to_unipoly_t();
                in.field = k;
                in.f_k = pp.to_kbivar();
            } else {
                in.f_q = pp.to_bivar();
            }
            if (s_have_cap) in.delta_cap_override = s_cap;
            if (s_nmax > 0) in.n_max_override = s_nmax;
            in.threads = s_threads;
            solver::SolveResult res = solver::special_points(in);
            if (s_table && !s_json) {
                render_solve_table(res, std::cout);
            } else {
                std::cout << solve_result_json(res).dump(2) << "\n";
            }
            return res.undecided.empty() ? 0 : 3;
        }
        if (sc_cp->parsed()) {
            cm::ClassPoly cp = cm::class_poly(cm::Disc::checked(cp_disc));
            json j;
            j["disc"] = cp.disc.value;
            j["class_number"] = cp.h;
            j["coefficients"] = coeff_list_desc(cp.coeffs);
            j["cert_margin"] = cp.cert_margin;
            std::cout << j.dump(2) << "\n";
            return 0;
        }
        if (sc_cy->parsed()) {
            poly::UniPoly phi = poly::cyclotomic(cy_n);
            json j;
            j["n"] = cy_n;
            j["degree"] = phi.degree();
            j["coefficients"] = unipoly_coeffs_desc(phi);
            std::cout << j.dump(2) << "\n";
            return 0;
        }
        if (sc_ver->parsed()) {
            verify::VerifyReport r = verify::run_check(v_check, v_maxn, v_trials);
            std::cout << verify_report_json(r).dump(2) << "\n";
            return r.pass() ? 0 : 1;
        }
    } catch (const cli::ParseError& e) {
        std::cerr << "syntax error: " << e.what() << "\n";
        return 2;
    } catch (const solver::CapTooLarge& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const solver::CurveRejected& e) {
        std::cerr << "rejected: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
