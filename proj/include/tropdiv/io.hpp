#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "tropdiv/clifford.hpp"
#include "tropdiv/divisor.hpp"
#include "tropdiv/generators.hpp"
#include "tropdiv/model.hpp"
#include "tropdiv/rank.hpp"
#include "tropdiv/reduction.hpp"

namespace tropdiv::io {

using json = nlohmann::json;

struct NamedModel {
    Model model;
    std::string name;
};

// text format: `graph <name>` header, then `edge <id> <u> <v> <num>/<den>`
// lines; '#' starts a comment
NamedModel read_graph(std::istream& in);
NamedModel read_graph_file(const std::string& path);  // .json files use the JSON mirror
void write_graph(std::ostream& out, const Model& m, const std::string& name);
void write_graph_file(const std::string& path, const Model& m, const std::string& name);

// `v:<id>` or `e:<id>@<num>/<den>`
PointRef parse_point(const std::string& text);
std::string format_point(const PointRef& p);

// lines: `chip <point> <coeff>`
Divisor read_divisor(std::istream& in);
Divisor read_divisor_file(const std::string& path);
void write_divisor(std::ostream& out, const Divisor& d);

json graph_to_json(const Model& m, const std::string& name);
NamedModel graph_from_json(const json& j);

json divisor_to_json(const Divisor& d);
Divisor divisor_from_json(const json& j);

json pl_to_json(const PLFunction& f);
PLFunction pl_from_json(const json& j);

json script_to_json(const FiringScript& s);

json rank_cert_to_json(const RankCertificate& c);
RankCertificate rank_cert_from_json(const json& j);

json involution_to_json(const Involution& iota);
Involution involution_from_json(const json& j);

json g12_cert_to_json(const G12Certificate& c);
G12Certificate g12_cert_from_json(const json& j);

json harness_report_to_json(const HarnessReport& rep);

}  // namespace tropdiv::io
