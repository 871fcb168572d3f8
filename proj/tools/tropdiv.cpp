#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "tropdiv/io.hpp"
#include "tropdiv/jacobian.hpp"

using namespace tropdiv;
using io::json;

namespace {

RankMethod parse_method(const std::string& m) {
    if (m == "subdivide") return RankMethod::Subdivide;
    if (m == "rds") return RankMethod::Rds;
    if (m == "both") return RankMethod::Both;
    fail(Errc::ParseError, "method must be subdivide, rds or both");
}

void emit(const json& j, bool as_json, const std::string& plain) {
    if (as_json)
        std::cout << j.dump(2) << "\n";
    else
        std::cout << plain << "\n";
}

void write_cert_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) fail(Errc::ParseError, "cannot write '" + path + "'");
    out << j.dump(2) << "\n";
}

std::string divisor_text(const Divisor& d) {
    std::ostringstream os;
    io::write_divisor(os, d);
    std::string s = os.str();
    if (!s.empty() && s.back() == '\n') s.pop_back();
    return s.empty() ? "(zero divisor)" : s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"divisor theory on metric graphs: ranks, reduced divisors, tropical Jacobians,\n"
                 "hyperellipticity and the degree-2r Clifford verification harness"};
    app.require_subcommand(1);

    bool as_json = false;
    app.add_flag("--json", as_json, "emit JSON instead of plain text");

    std::string graph_path, divisor_path, divisor2_path, point_text, cert_path, out_path;
    std::string method_text = "both";
    long long max_subdiv = kDefaultMaxSubdiv;
    long long trials = 1000;
    std::uint64_t seed = 1;
    int threads = 0;
    int genus_arg = 4;

    auto* c_genus = app.add_subcommand("genus", "print the genus of a graph");
    c_genus->add_option("graph", graph_path)->required();

    auto* c_canonical = app.add_subcommand("canonical", "print the canonical divisor");
    c_canonical->add_option("graph", graph_path)->required();

    auto* c_rank = app.add_subcommand("rank", "Baker-Norine rank of a divisor");
    c_rank->add_option("graph", graph_path)->required();
    c_rank->add_option("divisor", divisor_path)->required();
    c_rank->add_option("--method", method_text, "subdivide | rds | both")->capture_default_str();
    c_rank->add_option("--max-subdiv", max_subdiv)->capture_default_str();
    c_rank->add_option("--cert", cert_path, "write a replayable certificate JSON here");

    auto* c_reduce = app.add_subcommand("reduce", "reduced divisor at a base point");
    c_reduce->add_option("graph", graph_path)->required();
    c_reduce->add_option("divisor", divisor_path)->required();
    c_reduce->add_option("--sink", point_text)->required();
    c_reduce->add_option("--max-subdiv", max_subdiv)->capture_default_str();

    auto* c_isred = app.add_subcommand("is-reduced", "test reducedness at a point");
    c_isred->add_option("graph", graph_path)->required();
    c_isred->add_option("divisor", divisor_path)->required();
    c_isred->add_option("--at", point_text)->required();

    auto* c_equiv = app.add_subcommand("equiv", "linear equivalence of two divisors");
    c_equiv->add_option("graph", graph_path)->required();
    c_equiv->add_option("divisor1", divisor_path)->required();
    c_equiv->add_option("divisor2", divisor2_path)->required();

    auto* c_aj = app.add_subcommand("aj", "Abel-Jacobi vector (exact rationals)");
    c_aj->add_option("graph", graph_path)->required();
    c_aj->add_option("divisor", divisor_path)->required();
    c_aj->add_option("--base", point_text, "base point, default v:0");

    auto* c_witness = app.add_subcommand("witness", "PL function with div f = D2 - D1");
    c_witness->add_option("graph", graph_path)->required();
    c_witness->add_option("divisor1", divisor_path)->required();
    c_witness->add_option("divisor2", divisor2_path)->required();

    auto* c_rr = app.add_subcommand("riemann-roch", "verify the Riemann-Roch identity");
    c_rr->add_option("graph", graph_path)->required();
    c_rr->add_option("divisor", divisor_path)->required();
    c_rr->add_option("--method", method_text)->capture_default_str();

    auto* c_cliff = app.add_subcommand("clifford-check", "degree >= 2*rank for special divisors");
    c_cliff->add_option("graph", graph_path)->required();
    c_cliff->add_option("divisor", divisor_path)->required();

    auto* c_find = app.add_subcommand("find-g12", "search for a degree-2 rank-1 divisor class");
    c_find->add_option("graph", graph_path)->required();
    c_find->add_option("--cert", cert_path, "write the certificate JSON here");

    auto* c_hyp = app.add_subcommand("hyperelliptic", "does the graph carry a g12?");
    c_hyp->add_option("graph", graph_path)->required();

    auto* c_verify = app.add_subcommand("clifford-verify", "run the Clifford theorem harness");
    c_verify->add_option("graph", graph_path)->required();
    c_verify->add_option("--trials", trials)->capture_default_str();
    c_verify->add_option("--seed", seed)->capture_default_str();
    c_verify->add_option("--threads", threads, "0 = hardware concurrency");

    auto* c_gen = app.add_subcommand("gen", "generate experiment models");
    bool gen_hyp = false, gen_nonhyp = false;
    c_gen->add_flag("--hyperelliptic", gen_hyp);
    c_gen->add_flag("--nonhyperelliptic", gen_nonhyp);
    c_gen->add_option("--genus", genus_arg)->required();
    c_gen->add_option("--seed", seed)->capture_default_str();
    c_gen->add_option("-o,--output", out_path, "write the graph here instead of stdout");

    auto* c_vcert = app.add_subcommand("verify-cert", "replay a certificate file");
    c_vcert->add_option("graph", graph_path)->required();
    c_vcert->add_option("cert", cert_path)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_genus->parsed()) {
            auto nm = io::read_graph_file(graph_path);
            emit(json{{"graph", nm.name}, {"genus", nm.model.genus()}}, as_json,
                 std::to_string(nm.model.genus()));
            return 0;
        }
        if (c_canonical->parsed()) {
            auto nm = io::read_graph_file(graph_path);
            Divisor k = canonical_divisor(nm.model);
            emit(json{{"graph", nm.name}, {"canonical", io::divisor_to_json(k)}, {"degree", k.degree()}}, as_json,
                 divisor_text(k));
            return 0;
        }
        if (c_rank->parsed()) {
            auto nm = io::read_graph_file(graph_path);
            Divisor d = io::read_divisor_file(divisor_path);
            RankOptions opts;
            opts.method = parse_method(method_text);
            opts.max_subdiv = max_subdiv;
            opts.want_certificate = !cert_path.empty();
            RankResult res = rank_metric(nm.model, d, opts);
            if (!cert_path.empty())
                write_cert_file(cert_path, json{{"type", "rank"},
                                                {"divisor", io::divisor_to_json(d)},
                                                {"certificate", io::rank_cert_to_json(*res.certificate)}});
            emit(json{{"rank", res.rank}, {"method", res.method}}, as_json, std::to_string(res.rank));
            return 0;
        }
        if (c_reduce->parsed()) {
            auto nm = io::read_graph_file(graph_path);
            Divisor d = io::read_divisor_file(divisor_path);
            PointRef p = io::parse_point(point_text);
            Divisor reduced = p_reduce_metric(nm.model, d, p, max_subdiv);
            json out{{"reduced", io::divisor_to_json(reduced)}, {"sink", io::format_point(p)}};
            if (d.vertex_supported() && p.is_vertex()) {
                ReductionResult rr = q_reduce(nm.model, d, p.vertex);
                out["script"] = io::script_to_json(rr.script);
            }
            emit(out, as_json, divisor_text(reduced));
            return 0;
        }
        if (c_isred->parsed()) {
            auto nm = io::read_graph_file(graph_path);
            Divisor d = io::read_divisor_file(divisor_path);
            PointRef p = io::parse_point(point_text);
            bool yes = is_p_reduced(nm.model, d, p);
            emit(json{{"reduced", yes}, {"at", io::format_point(p)}}, as_json, yes ? "true" : "false");
            return 0;
        }
        if (c_equiv->parsed()) {
            auto nm = io::read_graph_file(graph_path);
            Divisor d1 = io::read_divisor_file(divisor_path);
            Divisor d2 = io::read_divisor_file(divisor2_path);
            bool yes = are_equivalent(nm.model, d1, d2);
            emit(json{{"equivalent", yes}}, as_json, yes ? "true" : "false");
            return 0;
        }
        if (c_aj->parsed()) {
            auto nm = io::read_graph_file(graph_path);
            Divisor d = io::read_divisor_file(divisor_path);
            PointRef base = point_text.empty() ? PointRef::at_vertex(0) : io::parse_point(point_text);
            PeriodLattice lattice = period_basis(nm.model);
            AJVector v = abel_jacobi(nm.model, lattice, d, base);
            json coords = json::array();
            std::string plain;
            for (int i = 0; i < v.coords.size(); ++i) {
                coords.push_back(v.coords(i).str());
                plain += (i ? " " : "") + v.coords(i).str();
            }
            emit(json{{"aj", coords}, {"base", io::format_point(base)}, {"degree", v.degree}}, as_json, plain);
            return 0;
        }
        if (c_witness->parsed()) {
            auto nm = io::read_graph_file(graph_path);
            Divisor d1 = io::read_divisor_file(divisor_path);
            Divisor d2 = io::read_divisor_file(divisor2_path);
            PLFunction f = equivalence_witness(nm.model, d1, d2);
            std::cout << io::pl_to_json(f).dump(2) << "\n";
            return 0;
        }
        if (c_rr->parsed()) {
            auto nm = io::read_graph_file(graph_path);
            Divisor d = io::read_divisor_file(divisor_path);
            RankOptions opts;
            opts.method = parse_method(method_text);
            RiemannRochReport rep = riemann_roch_report(nm.model, d, opts);
            emit(json{{"degree", rep.degree},
                      {"genus", rep.genus},
                      {"rank", rep.rank_d},
                      {"rank_canonical_minus", rep.rank_kd},
                      {"identity_holds", rep.identity_holds}},
                 as_json,
                 "r(D)=" + std::to_string(rep.rank_d) + " r(K-D)=" + std::to_string(rep.rank_kd) +
                     " identity " + (rep.identity_holds ? "holds" : "VIOLATED"));
            return rep.identity_holds ? 0 : 1;
        }
        if (c_cliff->parsed()) {
            auto nm = io::read_graph_file(graph_path);
            Divisor d = io::read_divisor_file(divisor_path);
            CliffordReport rep = clifford_check(nm.model, d);
            emit(json{{"degree", rep.degree},
                      {"rank", rep.rank},
                      {"rank_canonical_minus", rep.rank_kd},
                      {"special", rep.special},
                      {"applicable", rep.applicable},
                      {"bound_holds", rep.bound_holds}},
                 as_json,
                 std::string(rep.special ? "special" : "not special") + ", bound " +
                     (rep.bound_holds ? "holds" : "VIOLATED"));
            return rep.bound_holds ? 0 : 1;
        }
        if (c_find->parsed() || c_hyp->parsed()) {
            auto nm = io::read_graph_file(graph_path);
            auto cert = find_g12(nm.model);
            if (cert && !cert_path.empty())
                write_cert_file(cert_path, json{{"type", "g12"}, {"certificate", io::g12_cert_to_json(*cert)}});
            if (c_hyp->parsed()) {
                emit(json{{"hyperelliptic", cert.has_value()}}, as_json, cert ? "true" : "false");
            } else if (cert) {
                emit(json{{"found", true}, {"divisor", io::divisor_to_json(cert->divisor)}}, as_json,
                     divisor_text(cert->divisor));
            } else {
                emit(json{{"found", false}}, as_json, "not found");
            }
            return 0;
        }
        if (c_verify->parsed()) {
            auto nm = io::read_graph_file(graph_path);
            HarnessReport rep = clifford_theorem_harness(nm.model, trials, seed, threads);
            json out = io::harness_report_to_json(rep);
            out["graph"] = nm.name;
            out["command"] = "clifford-verify";
            if (as_json) {
                std::cout << out.dump(2) << "\n";
            } else {
                std::cout << rep.campaign << " campaign on genus " << rep.genus << ": "
                          << (rep.pass ? "PASS" : "FAIL") << " (" << rep.samples_checked << " checks, "
                          << rep.counterexamples.size() << " counterexamples)\n";
            }
            return rep.pass ? 0 : 1;
        }
        if (c_gen->parsed()) {
            if (gen_hyp == gen_nonhyp) fail(Errc::ParseError, "pick exactly one of --hyperelliptic / --nonhyperelliptic");
            Model m = gen_hyp ? gen_hyperelliptic_genus(genus_arg, seed).model
                              : gen_nonhyperelliptic(genus_arg, seed);
            std::string name = (gen_hyp ? "hyperelliptic_g" : "nonhyperelliptic_g") + std::to_string(genus_arg) +
                               "_s" + std::to_string(seed);
            if (!out_path.empty()) {
                io::write_graph_file(out_path, m, name);
            } else if (as_json) {
                std::cout << io::graph_to_json(m, name).dump(2) << "\n";
            } else {
                io::write_graph(std::cout, m, name);
            }
            return 0;
        }
        if (c_vcert->parsed()) {
            auto nm = io::read_graph_file(graph_path);
            std::ifstream in(cert_path);
            if (!in) fail(Errc::ParseError, "cannot open '" + cert_path + "'");
            json j = json::parse(in, nullptr, true, true);
            std::string type = j.at("type").get<std::string>();
            bool ok = false;
            std::string why;
            if (type == "rank") {
                Divisor d = io::divisor_from_json(j.at("divisor"));
                ok = verify_rank_certificate(nm.model, d, io::rank_cert_from_json(j.at("certificate")), &why);
            } else if (type == "g12") {
                ok = verify_g12_certificate(nm.model, io::g12_cert_from_json(j.at("certificate")), &why);
            } else {
                fail(Errc::ParseError, "unknown certificate type '" + type + "'");
            }
            emit(json{{"valid", ok}, {"reason", why}}, as_json, ok ? "valid" : "INVALID: " + why);
            return ok ? 0 : 1;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
