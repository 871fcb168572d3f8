#include "tropdiv/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace tropdiv::io {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream is(line);
    std::string tok;
    while (is >> tok) {
        if (tok[0] == '#') break;
        out.push_back(tok);
    }
    return out;
}

[[noreturn]] void parse_fail(const std::string& what) { fail(Errc::ParseError, what); }

}  // namespace

NamedModel read_graph(std::istream& in) {
    std::string name = "graph";
    struct Row {
        int id;
        Edge edge;
    };
    std::vector<Row> rows;
    int max_vertex = -1;
    std::string line;
    while (std::getline(in, line)) {
        auto toks = tokenize(line);
        if (toks.empty()) continue;
        if (toks[0] == "graph") {
            if (toks.size() >= 2) name = toks[1];
        } else if (toks[0] == "edge") {
            if (toks.size() != 5) parse_fail("edge line needs: edge <id> <u> <v> <length>");
            Row r;
            r.id = std::stoi(toks[1]);
            r.edge.u = std::stoi(toks[2]);
            r.edge.v = std::stoi(toks[3]);
            r.edge.length = Rational::parse(toks[4]);
            max_vertex = std::max({max_vertex, r.edge.u, r.edge.v});
            rows.push_back(r);
        } else {
            parse_fail("unknown directive '" + toks[0] + "'");
        }
    }
    if (rows.empty()) parse_fail("graph has no edges");
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.id < b.id; });
    for (size_t i = 0; i < rows.size(); ++i)
        if (rows[i].id != static_cast<int>(i)) parse_fail("edge ids must be 0..m-1 without gaps");
    std::vector<Edge> edges;
    for (const Row& r : rows) edges.push_back(r.edge);
    return {Model::build(max_vertex + 1, std::move(edges)), name};
}

NamedModel read_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::ParseError, "cannot open '" + path + "'");
    if (path.size() > 5 && path.substr(path.size() - 5) == ".json") {
        json j = json::parse(in, nullptr, true, true);
        return graph_from_json(j);
    }
    return read_graph(in);
}

void write_graph(std::ostream& out, const Model& m, const std::string& name) {
    out << "graph " << name << "\n";
    for (EdgeId e = 0; e < m.edge_count(); ++e) {
        const Edge& ed = m.edge(e);
        out << "edge " << e << " " << ed.u << " " << ed.v << " " << ed.length.str() << "\n";
    }
}

void write_graph_file(const std::string& path, const Model& m, const std::string& name) {
    std::ofstream out(path);
    if (!out) fail(Errc::ParseError, "cannot write '" + path + "'");
    if (path.size() > 5 && path.substr(path.size() - 5) == ".json") {
        out << graph_to_json(m, name).dump(2) << "\n";
        return;
    }
    write_graph(out, m, name);
}

PointRef parse_point(const std::string& text) {
    if (text.rfind("v:", 0) == 0) return PointRef::at_vertex(std::stoi(text.substr(2)));
    if (text.rfind("e:", 0) == 0) {
        auto at = text.find('@');
        if (at == std::string::npos) parse_fail("interior point needs e:<id>@<offset>");
        EdgeId e = std::stoi(text.substr(2, at - 2));
        return PointRef::on_edge(e, Rational::parse(text.substr(at + 1)));
    }
    parse_fail("point must be v:<id> or e:<id>@<offset>, got '" + text + "'");
}

std::string format_point(const PointRef& p) { return p.str(); }

Divisor read_divisor(std::istream& in) {
    Divisor d;
    std::string line;
    while (std::getline(in, line)) {
        auto toks = tokenize(line);
        if (toks.empty()) continue;
        if (toks[0] != "chip" || toks.size() != 3) parse_fail("divisor line needs: chip <point> <coeff>");
        d.add(parse_point(toks[1]), std::stoll(toks[2]));
    }
    return d;
}

Divisor read_divisor_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::ParseError, "cannot open '" + path + "'");
    if (path.size() > 5 && path.substr(path.size() - 5) == ".json") {
        json j = json::parse(in, nullptr, true, true);
        return divisor_from_json(j);
    }
    return read_divisor(in);
}

void write_divisor(std::ostream& out, const Divisor& d) {
    for (const auto& [p, c] : d.entries()) out << "chip " << format_point(p) << " " << c << "\n";
}

json graph_to_json(const Model& m, const std::string& name) {
    json edges = json::array();
    for (EdgeId e = 0; e < m.edge_count(); ++e) {
        const Edge& ed = m.edge(e);
        edges.push_back({{"id", e}, {"u", ed.u}, {"v", ed.v}, {"length", ed.length.str()}});
    }
    return {{"graph", name}, {"vertices", m.vertex_count()}, {"edges", edges}};
}

NamedModel graph_from_json(const json& j) {
    std::string name = j.value("graph", "graph");
    int n = j.at("vertices").get<int>();
    std::vector<std::pair<int, Edge>> rows;
    for (const json& je : j.at("edges")) {
        Edge e;
        e.u = je.at("u").get<int>();
        e.v = je.at("v").get<int>();
        e.length = Rational::parse(je.at("length").get<std::string>());
        rows.push_back({je.at("id").get<int>(), e});
    }
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Edge> edges;
    for (size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].first != static_cast<int>(i)) parse_fail("edge ids must be 0..m-1 without gaps");
        edges.push_back(rows[i].second);
    }
    return {Model::build(n, std::move(edges)), name};
}

json divisor_to_json(const Divisor& d) {
    json arr = json::array();
    for (const auto& [p, c] : d.entries()) arr.push_back({{"point", format_point(p)}, {"coeff", c}});
    return arr;
}

Divisor divisor_from_json(const json& j) {
    Divisor d;
    for (const json& je : j) d.add(parse_point(je.at("point").get<std::string>()), je.at("coeff").get<long long>());
    return d;
}

json pl_to_json(const PLFunction& f) {
    json tracks = json::array();
    for (const auto& t : f.tracks) {
        json offsets = json::array(), values = json::array();
        for (const auto& o : t.offsets) offsets.push_back(o.str());
        for (const auto& v : t.values) values.push_back(v.str());
        tracks.push_back({{"offsets", offsets}, {"values", values}});
    }
    return {{"tracks", tracks}};
}

PLFunction pl_from_json(const json& j) {
    PLFunction f;
    for (const json& jt : j.at("tracks")) {
        PLFunction::Track t;
        for (const json& o : jt.at("offsets")) t.offsets.push_back(Rational::parse(o.get<std::string>()));
        for (const json& v : jt.at("values")) t.values.push_back(Rational::parse(v.get<std::string>()));
        f.tracks.push_back(std::move(t));
    }
    return f;
}

json script_to_json(const FiringScript& s) {
    json counts = json::object();
    for (size_t v = 0; v < s.counts.size(); ++v)
        if (s.counts[v] != 0) counts[std::to_string(v)] = s.counts[v];
    return {{"sink", s.sink}, {"counts", counts}};
}

json rank_cert_to_json(const RankCertificate& c) {
    json out{{"claimed_rank", c.claimed_rank}, {"method", c.method}, {"sink", format_point(c.sink)}};
    json lower = json::array();
    for (const auto& entry : c.lower)
        lower.push_back({{"witness", divisor_to_json(entry.witness)},
                         {"representative", divisor_to_json(entry.representative)}});
    out["lower"] = lower;
    if (c.upper)
        out["upper"] = {{"blocker", divisor_to_json(c.upper->blocker)}, {"reduced", divisor_to_json(c.upper->reduced)}};
    if (c.fastpath_kd_reduced) out["fastpath_kd_reduced"] = divisor_to_json(*c.fastpath_kd_reduced);
    return out;
}

RankCertificate rank_cert_from_json(const json& j) {
    RankCertificate c;
    c.claimed_rank = j.at("claimed_rank").get<int>();
    c.method = j.at("method").get<std::string>();
    c.sink = parse_point(j.at("sink").get<std::string>());
    for (const json& je : j.at("lower")) {
        RankCertificate::LowerEntry entry;
        entry.witness = divisor_from_json(je.at("witness"));
        entry.representative = divisor_from_json(je.at("representative"));
        c.lower.push_back(std::move(entry));
    }
    if (j.contains("upper")) {
        RankCertificate::UpperEntry up;
        up.blocker = divisor_from_json(j.at("upper").at("blocker"));
        up.reduced = divisor_from_json(j.at("upper").at("reduced"));
        c.upper = std::move(up);
    }
    if (j.contains("fastpath_kd_reduced")) c.fastpath_kd_reduced = divisor_from_json(j.at("fastpath_kd_reduced"));
    return c;
}

json involution_to_json(const Involution& iota) {
    json emap = json::array();
    for (const auto& [image, reversed] : iota.edge_map) emap.push_back({{"image", image}, {"reversed", reversed}});
    return {{"vertex_map", iota.vertex_map}, {"edge_map", emap}};
}

Involution involution_from_json(const json& j) {
    Involution iota;
    iota.vertex_map = j.at("vertex_map").get<std::vector<VertexId>>();
    for (const json& je : j.at("edge_map"))
        iota.edge_map.push_back({je.at("image").get<EdgeId>(), je.at("reversed").get<bool>()});
    return iota;
}

json g12_cert_to_json(const G12Certificate& c) {
    json out{{"divisor", divisor_to_json(c.divisor)}, {"rank_certificate", rank_cert_to_json(c.rank_cert)}};
    if (c.involution) out["involution"] = involution_to_json(*c.involution);
    return out;
}

G12Certificate g12_cert_from_json(const json& j) {
    G12Certificate c;
    c.divisor = divisor_from_json(j.at("divisor"));
    c.rank_cert = rank_cert_from_json(j.at("rank_certificate"));
    if (j.contains("involution")) c.involution = involution_from_json(j.at("involution"));
    return c;
}

json harness_report_to_json(const HarnessReport& rep) {
    json out{{"campaign", rep.campaign}, {"genus", rep.genus},      {"trials", rep.trials},
             {"seed", rep.seed},         {"pass", rep.pass},        {"samples_checked", rep.samples_checked},
             {"timing_ms", rep.elapsed_ms}};
    if (rep.g12) out["g12_certificate"] = g12_cert_to_json(*rep.g12);
    json fw = json::array();
    for (const auto& chk : rep.forward)
        fw.push_back({{"r", chk.r}, {"expected_rank", chk.expected_rank}, {"rank", chk.rank}, {"pass", chk.pass}});
    out["forward_checks"] = fw;
    json cex = json::array();
    for (const auto& c : rep.counterexamples)
        cex.push_back({{"r", c.r}, {"trial", c.trial}, {"divisor", divisor_to_json(c.divisor)}, {"rank", c.rank}});
    out["counterexamples"] = cex;
    return out;
}

}  // namespace tropdiv::io
