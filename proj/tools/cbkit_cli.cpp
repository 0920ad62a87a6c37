// cbkit command-line interface: JSON in, JSON out, stable exit codes.
//
// Exit codes: 0 = success / property held; 1 = property violated or
// counterexample found (reproducer included in the output); 2 = invalid
// input. All diagnostics go to stderr; stdout carries exactly one JSON
// document. Every run echoes its fully-resolved configuration, so
// re-running with the echoed flags reproduces the output byte for byte
// (the "timing" block is the only excluded field).

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cbkit/instances.hpp"
#include "cbkit/json_io.hpp"

using namespace cbkit;

namespace {

struct GlobalOpts {
    std::string field = "101";
    std::uint64_t seed = 0;
    std::string output = "json";
    std::size_t workers = 1;
};

void emit(const Json& config, const Json& result, const GlobalOpts& g) {
    Json doc;
    doc["schema"] = kSchemaTag;
    doc["config"] = config;
    doc["result"] = result;
    if (g.output == "pretty")
        std::cout << doc.dump(2) << "\n";
    else
        std::cout << doc.dump() << "\n";
}

Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw field_error("cannot open file: " + path);
    Json j;
    in >> j;
    return j;
}

Json global_config(const std::string& subcommand, const GlobalOpts& g) {
    Json c;
    c["subcommand"] = subcommand;
    c["field"] = g.field;
    c["seed"] = g.seed;
    c["output"] = g.output;
    c["workers"] = g.workers;
    return c;
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(tok);
    return out;
}

std::vector<Scalar> parse_vector(const FieldPtr& field, const std::string& s) {
    std::vector<Scalar> v;
    for (const auto& tok : split_commas(s)) v.push_back(field->parse(tok));
    return v;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cbkit: exact Cayley-Bacharach and projection-degree toolkit"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--field", g.field, "field spec: prime p, p^k, or Q")
        ->capture_default_str();
    app.add_option("--seed", g.seed, "RNG seed")->capture_default_str();
    app.add_option("--output", g.output, "output style")
        ->check(CLI::IsMember({"json", "pretty"}))
        ->capture_default_str();
    app.add_option("--workers", g.workers, "worker threads (search only)")
        ->capture_default_str();
    app.fallthrough();

    // cb-check ------------------------------------------------------------
    auto* cb_cmd = app.add_subcommand("cb-check", "test the CB(m) condition on a point set");
    unsigned cb_m = 1;
    std::string cb_points, cb_engine = "fast";
    cb_cmd->add_option("--m", cb_m, "divisor degree m")->required();
    cb_cmd->add_option("--points", cb_points, "point-set JSON file")->required();
    cb_cmd->add_option("--engine", cb_engine, "rank engine")
        ->check(CLI::IsMember({"fast", "naive"}))
        ->capture_default_str();

    // classify ------------------------------------------------------------
    auto* cl_cmd = app.add_subcommand("classify", "most special degree <= 2 curve through a set");
    std::string cl_points;
    cl_cmd->add_option("--points", cl_points, "point-set JSON file")->required();

    // project -------------------------------------------------------------
    auto* pr_cmd = app.add_subcommand("project", "projection degree and fiber CB verification");
    std::string pr_construction, pr_case = "generic";
    std::size_t pr_n = 2, pr_factor = 0, pr_fibers = 0, pr_samples = 10;
    unsigned pr_d = 4, pr_k = 2, pr_m = 4;
    std::string pr_dims = "1,2", pr_degrees = "3,4";
    pr_cmd->add_option("--construction", pr_construction, "which projection")
        ->check(CLI::IsMember({"quadric_line", "quadric_double", "ci22", "grassmann", "product"}))
        ->required();
    pr_cmd->add_option("--n", pr_n, "dimension of X (quadric_line)")->capture_default_str();
    pr_cmd->add_option("--d", pr_d, "hypersurface degree")->capture_default_str();
    pr_cmd->add_option("--case", pr_case, "ci22 section shape")
        ->check(CLI::IsMember({"generic", "line", "conic"}))
        ->capture_default_str();
    pr_cmd->add_option("--gr-k", pr_k, "Grassmannian k")->capture_default_str();
    pr_cmd->add_option("--gr-m", pr_m, "Grassmannian m")->capture_default_str();
    pr_cmd->add_option("--dims", pr_dims, "product factor dimensions")->capture_default_str();
    pr_cmd->add_option("--degrees", pr_degrees, "product multidegree")->capture_default_str();
    pr_cmd->add_option("--factor", pr_factor, "product projection factor")->capture_default_str();
    pr_cmd->add_option("--fibers", pr_fibers, "number of fibers to verify")->capture_default_str();
    pr_cmd->add_option("--samples", pr_samples, "degree sampling count")->capture_default_str();

    // pencil --------------------------------------------------------------
    auto* pe_cmd = app.add_subcommand("pencil", "discriminant analysis of a quadric pencil");
    std::string pe_file;
    bool pe_reference = false;
    pe_cmd->add_option("--pencil", pe_file, "pencil JSON file (field, m1, m2)");
    pe_cmd->add_flag("--reference", pe_reference, "use the I / diag(1..6) reference pencil");

    // bounds --------------------------------------------------------------
    auto* bo_cmd = app.add_subcommand("bounds", "degree-of-irrationality bounds calculator");
    std::string bo_family, bo_dims, bo_degrees;
    unsigned bo_n = 0, bo_d = 0, bo_k = 0, bo_m = 0;
    bool bo_line = false, bo_conic = false;
    bo_cmd->add_option("--family", bo_family, "ambient family")
        ->check(CLI::IsMember({"projective_space", "quadric", "cubic", "ci22", "grassmannian",
                               "product"}))
        ->required();
    bo_cmd->add_option("--n", bo_n, "dimension of X");
    bo_cmd->add_option("--d", bo_d, "hypersurface degree");
    bo_cmd->add_option("--k", bo_k, "Grassmannian k");
    bo_cmd->add_option("--m", bo_m, "Grassmannian m");
    bo_cmd->add_option("--dims", bo_dims, "product factor dimensions m_1,..,m_k");
    bo_cmd->add_option("--degrees", bo_degrees, "product degrees d_1,..,d_k");
    bo_cmd->add_flag("--contains-line", bo_line, "assume X contains a line");
    bo_cmd->add_flag("--contains-conic", bo_conic, "assume X contains a conic");

    // search --------------------------------------------------------------
    auto* se_cmd = app.add_subcommand("search", "run a CB configuration search job");
    std::string se_job;
    bool se_invert = false;
    se_cmd->add_option("--job", se_job, "search job JSON file")->required();
    se_cmd->add_flag("--invert-implication", se_invert,
                     "fault injection: record conforming sets as violations");

    // embed ---------------------------------------------------------------
    auto* em_cmd = app.add_subcommand("embed", "Pluecker or Segre embedding of explicit data");
    std::string em_model;
    unsigned em_k = 2, em_m = 4;
    std::string em_dims = "1,2";
    std::vector<std::string> em_rows, em_points;
    em_cmd->add_option("--model", em_model, "embedding model")
        ->check(CLI::IsMember({"plucker", "segre"}))
        ->required();
    em_cmd->add_option("--gr-k", em_k, "Grassmannian k")->capture_default_str();
    em_cmd->add_option("--gr-m", em_m, "Grassmannian m")->capture_default_str();
    em_cmd->add_option("--dims", em_dims, "Segre factor dimensions")->capture_default_str();
    em_cmd->add_option("--row", em_rows, "subspace basis row (repeatable, comma coords)");
    em_cmd->add_option("--point", em_points, "factor point (repeatable, comma coords)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*cb_cmd) {
            Json config = global_config("cb-check", g);
            config["m"] = cb_m;
            config["points"] = cb_points;
            config["engine"] = cb_engine;
            PointSet s = point_set_from_json(load_json(cb_points));
            CbReport rep = cb_engine == "naive" ? cb_check_naive(s, cb_m) : cb_check(s, cb_m);
            Json result;
            result["holds"] = rep.holds;
            result["report"] = cb_report_to_json(rep);
            emit(config, result, g);
            return rep.holds ? 0 : 1;
        }

        if (*cl_cmd) {
            Json config = global_config("classify", g);
            config["points"] = cl_points;
            PointSet s = point_set_from_json(load_json(cl_points));
            emit(config, curve_class_to_json(classify_degree2(s)), g);
            return 0;
        }

        if (*pr_cmd) {
            Json config = global_config("project", g);
            config["construction"] = pr_construction;
            config["d"] = pr_d;
            config["fibers"] = pr_fibers;
            config["samples"] = pr_samples;
            FieldPtr field = field_from_spec(g.field);
            Rng rng(g.seed);
            DegreeReport report;
            std::vector<FiberSample> fibers;
            if (pr_construction == "quadric_line") {
                config["n"] = pr_n;
                auto inst = make_quadric_line_instance(field, pr_n, pr_d, rng);
                report = degree_quadric_line(inst.quadric, inst.line, inst.f, rng, pr_samples);
                if (pr_fibers)
                    fibers = verify_fiber_cb_quadric_line(inst.quadric, inst.line, inst.f,
                                                          pr_fibers, rng);
            } else if (pr_construction == "quadric_double") {
                auto inst = make_quadric_double_instance(field, pr_d, rng);
                report = degree_quadric_double(inst.quadric, inst.v, inst.w, inst.f, rng,
                                               pr_samples);
                if (pr_fibers)
                    fibers = verify_fiber_cb_quadric_double(inst.quadric, inst.v, inst.w,
                                                            inst.f, pr_fibers, rng);
            } else if (pr_construction == "ci22") {
                config["case"] = pr_case;
                Ci22Case which = pr_case == "line"    ? Ci22Case::contains_line
                                 : pr_case == "conic" ? Ci22Case::contains_conic
                                                      : Ci22Case::generic;
                auto inst = make_ci22_instance(field, pr_d, which, rng);
                report = degree_ci22_plane(inst.pencil, inst.plane, inst.g, rng, pr_samples);
                if (pr_fibers)
                    fibers = verify_fiber_cb_ci22(inst.pencil, inst.plane, inst.g, pr_fibers,
                                                  rng);
            } else if (pr_construction == "grassmann") {
                config["gr_k"] = pr_k;
                config["gr_m"] = pr_m;
                auto inst = make_grassmann_instance(field, pr_k, pr_m, pr_d, rng);
                report = degree_grassmann_flag(inst.model, inst.lambda, inst.w, inst.f, rng,
                                               pr_samples);
                if (pr_fibers)
                    fibers = verify_fiber_cb_grassmann(inst.model, inst.lambda, inst.w, inst.f,
                                                       pr_fibers, rng);
            } else {  // product
                config["dims"] = pr_dims;
                config["degrees"] = pr_degrees;
                config["factor"] = pr_factor;
                std::vector<std::size_t> dims;
                for (const auto& t : split_commas(pr_dims))
                    dims.push_back(std::stoul(t));
                std::vector<unsigned> degs;
                for (const auto& t : split_commas(pr_degrees))
                    degs.push_back(static_cast<unsigned>(std::stoul(t)));
                auto inst = make_product_instance(field, dims, degs, pr_factor, rng);
                report = degree_product_point(inst.model, pr_factor, inst.center, inst.f, rng,
                                              pr_samples);
                if (pr_fibers)
                    fibers = verify_fiber_cb_product(inst.model, pr_factor, inst.center,
                                                     inst.f, pr_fibers, rng);
            }
            Json result;
            result["degree"] = degree_report_to_json(report);
            Json fj = Json::array();
            bool cb_failed = false;
            for (const auto& fib : fibers) {
                fj.push_back(fiber_sample_to_json(fib));
                if (fib.cb && !fib.cb->holds) cb_failed = true;
            }
            result["fibers"] = std::move(fj);
            emit(config, result, g);
            return cb_failed ? 1 : 0;
        }

        if (*pe_cmd) {
            Json config = global_config("pencil", g);
            QuadricPencil pencil = [&] {
                if (pe_reference) {
                    config["reference"] = true;
                    FieldPtr field = field_from_spec(g.field);
                    return QuadricPencil(ExactMatrix::identity(field, 6),
                                         detail::diagonal_matrix(field, {1, 2, 3, 4, 5, 6}));
                }
                if (pe_file.empty())
                    throw field_error("pencil needs --pencil FILE or --reference");
                config["pencil"] = pe_file;
                return pencil_from_json(load_json(pe_file));
            }();
            Rng rng(g.seed);
            Json result;
            result["pencil"] = pencil_to_json(pencil);
            result["discriminant"] = pencil_discriminant_to_json(pencil_discriminant(pencil, rng));
            emit(config, result, g);
            return 0;
        }

        if (*bo_cmd) {
            Json config = global_config("bounds", g);
            BoundsQuery q;
            q.family = *bounds_family_from_name(bo_family);
            q.n = bo_n;
            q.d = bo_d;
            q.k = bo_k;
            q.m = bo_m;
            for (const auto& t : split_commas(bo_dims))
                if (!t.empty()) q.factor_dims.push_back(static_cast<unsigned>(std::stoul(t)));
            for (const auto& t : split_commas(bo_degrees))
                if (!t.empty())
                    q.factor_degrees.push_back(static_cast<unsigned>(std::stoul(t)));
            q.contains_line = bo_line;
            q.contains_conic = bo_conic;
            Json query = bounds_query_to_json(q);
            for (auto& [key, value] : query.items()) config[key] = value;
            Json result;
            result["verdict"] = bounds_verdict_to_json(irr_bounds(q));
            emit(config, result, g);
            return 0;
        }

        if (*se_cmd) {
            Json config = global_config("search", g);
            config["job_file"] = se_job;
            SearchJob job = search_job_from_json(load_json(se_job));
            job.invert_implication = se_invert;
            config["job"] = search_job_to_json(job);
            if (se_invert) config["invert_implication"] = true;
            SearchOutcome out = run_search(job, g.workers);
            Json result;
            result["outcome"] = search_outcome_to_json(out, /*with_timing=*/false);
            Json timing;  // excluded from byte-level reproducibility comparisons
            timing["elapsed_seconds"] = out.elapsed_seconds;
            timing["trials_per_second"] = out.trials_per_second;
            result["timing"] = std::move(timing);
            emit(config, result, g);
            return out.violations.empty() ? 0 : 1;
        }

        if (*em_cmd) {
            Json config = global_config("embed", g);
            config["model"] = em_model;
            FieldPtr field = field_from_spec(g.field);
            ProjectivePoint image = [&]() -> ProjectivePoint {
                if (em_model == "plucker") {
                    config["gr_k"] = em_k;
                    config["gr_m"] = em_m;
                    config["rows"] = em_rows;
                    if (em_rows.empty()) throw field_error("plucker embedding needs --row");
                    std::vector<std::vector<Scalar>> rows;
                    for (const auto& r : em_rows) rows.push_back(parse_vector(field, r));
                    return plucker_embed(PluckerModel(em_k, em_m),
                                         LinearSubspace(field, rows));
                }
                config["dims"] = em_dims;
                config["points"] = em_points;
                std::vector<std::size_t> dims;
                for (const auto& t : split_commas(em_dims)) dims.push_back(std::stoul(t));
                if (em_points.size() != dims.size())
                    throw field_error("segre embedding needs one --point per factor");
                std::vector<ProjectivePoint> pts;
                for (const auto& p : em_points)
                    pts.emplace_back(field, parse_vector(field, p));
                return segre_embed(SegreModel(dims), pts);
            }();
            Json result;
            result["ambient_dim"] = image.ambient_dim();
            result["image"] = scalar_list_to_json(image.coords());
            emit(config, result, g);
            return 0;
        }
    } catch (const field_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
