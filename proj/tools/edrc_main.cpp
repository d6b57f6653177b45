#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "edrc/engine.hpp"
#include "json.hpp"

using json = nlohmann::ordered_json;
using namespace edrc;

namespace {

std::uint64_t env_seed() {
    const char* s = std::getenv("EDRC_SEED");
    return s ? static_cast<std::uint64_t>(std::atoll(s)) : 0u;
}

std::vector<poly::MultiPoly> parse_list(const std::vector<std::string>& texts,
                                        const poly::VarSetPtr& vars) {
    std::vector<poly::MultiPoly> out;
    for (const auto& t : texts) out.push_back(poly::parse_poly(t, vars));
    return out;
}

json result_header(const std::string& mode) {
    json j;
    j["mode"] = mode;
    return j;
}

json representatives_json(const hypercoh::CohomologyResult& coh) {
    json reps = json::array();
    for (const auto& [p, forms] : coh.representatives) {
        for (std::size_t i = 0; i < forms.size(); ++i) {
            json r;
            r["p"] = p;
            r["form"] = engine::form_to_string(forms[i]);
            auto st = coh.stamps.count(p) && i < coh.stamps.at(p).size()
                          ? coh.stamps.at(p)[i]
                          : ring::filtration_stamp(forms[i]);
            r["order"] = st.order_s;
            r["degree"] = st.degree_d;
            r["certified"] = coh.certified.count(p) ? coh.certified.at(p) : false;
            reps.push_back(std::move(r));
        }
    }
    return reps;
}

json cohomology_json(const hypercoh::CohomologyResult& coh) {
    json j;
    j["dims"] = coh.dims;
    j["representatives"] = representatives_json(coh);
    json bounds;
    for (const auto& [p, b] : coh.bounds) bounds["p" + std::to_string(p)] = b.get_str();
    j["bounds"] = std::move(bounds);
    json cert;
    for (const auto& [p, c] : coh.certified) cert["p" + std::to_string(p)] = c;
    j["certified"] = std::move(cert);
    return j;
}

void emit(const json& j, const std::string& output_path, bool timings,
          std::chrono::steady_clock::time_point start) {
    json out = j;
    if (timings) {
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - start)
                      .count();
        out["timings"] = {{"total_ms", ms}};
    }
    std::string text = out.dump(2) + "\n";
    if (output_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(output_path);
        f << text;
    }
}

bool all_certified(const hypercoh::CohomologyResult& coh) {
    for (const auto& [p, c] : coh.certified)
        if (!c) return false;
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"edrc: exact algebraic de Rham cohomology at desk scale"};
    app.require_subcommand(1);

    std::string vars_text = "x,y";
    std::string output_path;
    bool timings = false;
    bool require_certified = false;
    std::uint64_t seed = env_seed();
    int p_max = 1, dim_m = 1, max_margin = 4;
    std::string degree_text = "1";

    app.add_option("--output", output_path, "write result JSON to a file");
    app.add_flag("--timings", timings, "include timings in the output JSON");
    app.add_option("--seed", seed, "random seed (default EDRC_SEED or 0)");

    // bounds
    auto* bounds_cmd = app.add_subcommand("bounds", "evaluate the closed-form degree bounds");
    engine::BoundsInputs bi;
    int b_p = -1, b_m = -1, b_n = -1, b_D = -1, b_d = -1, b_dp = -1, b_d0 = -1, b_d1 = -1,
        b_s = -1, b_ell = -1, b_t = -1, b_da = -1;
    std::vector<std::string> comp_degrees;
    bounds_cmd->add_option("--p", b_p);
    bounds_cmd->add_option("--m", b_m);
    bounds_cmd->add_option("--n", b_n);
    bounds_cmd->add_option("--D", b_D);
    bounds_cmd->add_option("--d", b_d);
    bounds_cmd->add_option("--dprime", b_dp);
    bounds_cmd->add_option("--d0", b_d0);
    bounds_cmd->add_option("--d1", b_d1);
    bounds_cmd->add_option("--s", b_s);
    bounds_cmd->add_option("--ell", b_ell);
    bounds_cmd->add_option("--t", b_t);
    bounds_cmd->add_option("--deg-alpha", b_da);
    bounds_cmd->add_option("--component-degrees", comp_degrees,
                           "degrees of the closed varieties for the ideal split bound");

    // certificate
    auto* cert_cmd = app.add_subcommand("certificate", "effective Nullstellensatz certificate");
    std::vector<std::string> ideal_texts, g_texts;
    int cert_cap = 16;
    cert_cmd->add_option("--vars", vars_text);
    cert_cmd->add_option("--ideal", ideal_texts, "ideal generators of X (may be empty)");
    cert_cmd->add_option("--g", g_texts, "polynomials without common zeros on X")->required();
    cert_cmd->add_option("--cap", cert_cap, "degree cap for the search");

    // idempotents
    auto* idem_cmd = app.add_subcommand("idempotents", "component idempotents");
    std::vector<std::string> component_texts;
    std::vector<int> component_dims;
    std::vector<std::string> component_degs;
    std::string method = "kollar";
    int idem_cap = 64;
    idem_cmd->add_option("--vars", vars_text);
    idem_cmd->add_option("--component", component_texts,
                         "generators of one component, separated by ';' (repeatable)")
        ->required();
    idem_cmd->add_option("--dims", component_dims, "dimension of each component");
    idem_cmd->add_option("--degrees", component_degs, "degree of each component");
    idem_cmd->add_option("--method", method, "jelonek or kollar");
    idem_cmd->add_option("--cap", idem_cap);

    // cohomology
    auto* coh_cmd = app.add_subcommand("cohomology", "de Rham cohomology of a closed variety");
    std::vector<std::string> coh_ideal;
    std::string route = "both";
    coh_cmd->add_option("--vars", vars_text);
    coh_cmd->add_option("--ideal", coh_ideal, "ideal generators");
    coh_cmd->add_option("--p-max", p_max);
    coh_cmd->add_option("--dim", dim_m, "dimension of X");
    coh_cmd->add_option("--degree", degree_text, "degree of X");
    coh_cmd->add_option("--route", route, "closed | patch | both");
    coh_cmd->add_option("--max-margin", max_margin);
    coh_cmd->add_flag("--require-certified", require_certified);

    // hypersurface
    auto* hyp_cmd = app.add_subcommand("hypersurface", "cohomology of Z(f) \\ Z(g)");
    std::string f_text, g_text;
    hyp_cmd->add_option("--vars", vars_text);
    hyp_cmd->add_option("--f", f_text)->required();
    hyp_cmd->add_option("--g", g_text)->required();
    hyp_cmd->add_option("--p-max", p_max);
    hyp_cmd->add_option("--max-margin", max_margin);
    hyp_cmd->add_flag("--require-certified", require_certified);

    // residue
    auto* res_cmd = app.add_subcommand("residue", "residue of a quotient-complex form");
    std::string res_f, res_g, res_num;
    std::vector<int> res_tuple;
    int res_order = 1;
    res_cmd->add_option("--vars", vars_text);
    res_cmd->add_option("--f", res_f)->required();
    res_cmd->add_option("--g", res_g)->required();
    res_cmd->add_option("--numerator", res_num, "numerator polynomial in X0 and the variables")
        ->required();
    res_cmd->add_option("--tuple", res_tuple, "differential indices, 0 = dX0")->required();
    res_cmd->add_option("--order", res_order, "order in f0 f1");

    // resolve
    auto* resv_cmd = app.add_subcommand("resolve", "birational hypersurface patch cover");
    std::vector<std::string> resv_ideal;
    resv_cmd->add_option("--vars", vars_text);
    resv_cmd->add_option("--ideal", resv_ideal)->required();
    resv_cmd->add_option("--dim", dim_m);
    resv_cmd->add_option("--degree", degree_text);

    CLI11_PARSE(app, argc, argv);
    auto start = std::chrono::steady_clock::now();

    try {
        if (bounds_cmd->parsed()) {
            auto set = [](std::optional<int>& dst, int v) {
                if (v >= 0) dst = v;
            };
            set(bi.p, b_p);
            set(bi.m, b_m);
            set(bi.n, b_n);
            set(bi.D, b_D);
            set(bi.d, b_d);
            set(bi.dprime, b_dp);
            set(bi.d0, b_d0);
            set(bi.d1, b_d1);
            set(bi.s, b_s);
            set(bi.ell, b_ell);
            set(bi.t, b_t);
            set(bi.deg_alpha, b_da);
            for (const auto& d : comp_degrees) bi.component_degrees.emplace_back(d, 10);
            auto report = engine::bounds_report(bi);
            json j = result_header("bounds");
            for (const auto& [k, v] : report.values) j["bounds"][k] = v.get_str();
            emit(j, output_path, timings, start);
            return 0;
        }
        auto vars = poly::make_vars(vars_text);

        if (cert_cmd->parsed()) {
            auto gens = parse_list(ideal_texts, vars);
            auto gs = parse_list(g_texts, vars);
            auto ring = ring::AffineRing::capped_quotient(vars, gens, cert_cap);
            auto cert = certs::find_certificate(ring, gs, cert_cap);
            json j = result_header("certificate");
            if (!cert) {
                j["found"] = false;
                emit(j, output_path, timings, start);
                return 3;
            }
            j["found"] = true;
            j["achieved_degree"] = cert->achieved_degree;
            json cof = json::array();
            for (const auto& h : cert->cofactors) cof.push_back(h.str());
            j["cofactors"] = std::move(cof);
            emit(j, output_path, timings, start);
            return 0;
        }

        if (idem_cmd->parsed()) {
            std::vector<certs::Component> components;
            for (std::size_t i = 0; i < component_texts.size(); ++i) {
                certs::Component c;
                std::stringstream ss(component_texts[i]);
                std::string part;
                while (std::getline(ss, part, ';'))
                    if (!part.empty()) c.generators.push_back(poly::parse_poly(part, vars));
                c.dim = i < component_dims.size() ? component_dims[i] : 1;
                c.degree = i < component_degs.size() ? BigInt(component_degs[i], 10) : BigInt(1);
                components.push_back(std::move(c));
            }
            auto idem = method == "jelonek"
                            ? certs::idempotents_jelonek(components,
                                                         static_cast<int>(vars->size()), idem_cap)
                            : certs::idempotents_kollar(components,
                                                        static_cast<int>(vars->size()), idem_cap);
            bool ok = certs::verify_idempotents(idem, idem_cap);
            json j = result_header("idempotents");
            j["verified"] = ok;
            j["max_degree"] = idem.max_degree;
            j["bound"] = idem.bound.get_str();
            json es = json::array();
            for (const auto& e : idem.idempotents) es.push_back(e.str());
            j["idempotents"] = std::move(es);
            emit(j, output_path, timings, start);
            return ok ? 0 : 3;
        }

        if (coh_cmd->parsed()) {
            engine::VarietySpec spec;
            spec.vars = vars;
            spec.generators = parse_list(coh_ideal, vars);
            spec.dim_m = dim_m;
            spec.degree_D = BigInt(degree_text, 10);
            json j = result_header("cohomology");
            hypercoh::CohomologyResult closed, patch;
            if (route == "closed" || route == "both") {
                closed = engine::closed_variety_cohomology(spec, p_max, max_margin);
                j["closed"] = cohomology_json(closed);
            }
            if (route == "patch" || route == "both") {
                auto pipe = engine::full_pipeline(spec, p_max, seed, max_margin);
                patch = pipe.cohomology;
                j["patch"] = cohomology_json(patch);
                j["charts"] = pipe.chart_count;
            }
            if (route == "both") {
                j["routes_agree"] = closed.dims == patch.dims;
                if (closed.dims != patch.dims) {
                    emit(j, output_path, timings, start);
                    return 3;
                }
            }
            const auto& main = route == "patch" ? patch : closed;
            j["dims"] = main.dims;
            emit(j, output_path, timings, start);
            if (require_certified && !all_certified(main)) return 4;
            return 0;
        }

        if (hyp_cmd->parsed()) {
            auto f = poly::parse_poly(f_text, vars);
            auto g = poly::parse_poly(g_text, vars);
            auto coh = hypercoh::hypersurface_cohomology(f, g, p_max, max_margin);
            json j = result_header("hypersurface");
            j.update(cohomology_json(coh));
            emit(j, output_path, timings, start);
            if (require_certified && !all_certified(coh)) return 4;
            return 0;
        }

        if (res_cmd->parsed()) {
            auto f = poly::parse_poly(res_f, vars);
            auto g = poly::parse_poly(res_g, vars);
            auto setup = std::make_shared<const gysin::GysinSetup>(f, g);
            auto num = poly::parse_poly(res_num, setup->ambient_vars());
            ring::DiffForm rep(setup->ambient_ring(), setup->divisor_product(),
                               static_cast<int>(res_tuple.size()));
            ring::IndexTuple tup(res_tuple.begin(), res_tuple.end());
            rep.add_term(tup, ring::LocalizedElem::make(setup->ambient_ring(),
                                                        setup->divisor_product(), num, res_order));
            auto res = gysin::residue(setup, gysin::QuotientForm{rep});
            json j = result_header("residue");
            j["form"] = engine::form_to_string(res.form);
            j["degree_bound"] = res.degree_bound.get_str();
            j["stamp_degree"] = res.stamp_degree;
            emit(j, output_path, timings, start);
            return 0;
        }

        if (resv_cmd->parsed()) {
            resolve::VarietyData data{vars, parse_list(resv_ideal, vars), dim_m,
                                      BigInt(degree_text, 10), 16};
            auto cover = resolve::patch_cover(data, seed);
            json j = result_header("resolve");
            j["charts"] = json::array();
            for (const auto& c : cover.charts) {
                json cj;
                cj["f"] = c.f.str();
                cj["g"] = c.g.str();
                cj["g_on_x"] = c.g_on_x.str();
                json ws = json::array();
                for (const auto& w : c.w) ws.push_back(w.str());
                cj["w"] = std::move(ws);
                j["charts"].push_back(std::move(cj));
            }
            j["cover_certificate_degree"] = cover.cover_certificate.achieved_degree;
            j["heuristic_points"] = cover.heuristic_points;
            emit(j, output_path, timings, start);
            return 0;
        }
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 1;
    } catch (const PreconditionError& e) {
        std::cerr << "precondition failed: " << e.what() << "\n";
        return 2;
    } catch (const ComputationError& e) {
        std::cerr << "computation failed: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
