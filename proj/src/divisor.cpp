#include "tropdiv/divisor.hpp"

#include <algorithm>
#include <sstream>

namespace tropdiv {

Divisor::Divisor(std::map<PointRef, long long> coeffs) : coeffs_(std::move(coeffs)) {
    for (auto it = coeffs_.begin(); it != coeffs_.end();)
        it = it->second == 0 ? coeffs_.erase(it) : std::next(it);
}

Divisor Divisor::at(const PointRef& p, long long c) {
    Divisor d;
    d.add(p, c);
    return d;
}

long long Divisor::coeff(const PointRef& p) const {
    auto it = coeffs_.find(p);
    return it == coeffs_.end() ? 0 : it->second;
}

void Divisor::add(const PointRef& p, long long c) {
    if (c == 0) return;
    auto [it, fresh] = coeffs_.try_emplace(p, 0);
    it->second += c;
    if (it->second == 0) coeffs_.erase(it);
}

long long Divisor::degree() const {
    long long d = 0;
    for (const auto& [p, c] : coeffs_) d += c;
    return d;
}

bool Divisor::is_effective() const {
    for (const auto& [p, c] : coeffs_)
        if (c < 0) return false;
    return true;
}

std::vector<PointRef> Divisor::support() const {
    std::vector<PointRef> s;
    s.reserve(coeffs_.size());
    for (const auto& [p, c] : coeffs_) s.push_back(p);
    return s;
}

bool Divisor::vertex_supported() const {
    for (const auto& [p, c] : coeffs_)
        if (!p.is_vertex()) return false;
    return true;
}

Divisor& Divisor::operator+=(const Divisor& o) {
    for (const auto& [p, c] : o.coeffs_) add(p, c);
    return *this;
}

Divisor& Divisor::operator-=(const Divisor& o) {
    for (const auto& [p, c] : o.coeffs_) add(p, -c);
    return *this;
}

Divisor operator*(long long k, const Divisor& d) {
    Divisor out;
    if (k == 0) return out;
    for (const auto& [p, c] : d.coeffs_) out.add(p, k * c);
    return out;
}

std::string Divisor::str() const {
    if (coeffs_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [p, c] : coeffs_) {
        if (!first) os << " + ";
        os << c << "*" << p.str();
        first = false;
    }
    return os.str();
}

Divisor canonical_divisor(const Model& m) {
    Divisor k;
    for (VertexId v = 0; v < m.vertex_count(); ++v)
        k.add(PointRef::at_vertex(v), m.valence(v) - 2);
    return k;
}

std::vector<long long> to_dense(const Model& m, const Divisor& d) {
    std::vector<long long> dense(static_cast<size_t>(m.vertex_count()), 0);
    for (const auto& [p, c] : d.entries()) {
        if (!p.is_vertex()) fail(Errc::InvalidPoint, "divisor not vertex-supported at " + p.str());
        dense[static_cast<size_t>(p.vertex)] = c;
    }
    return dense;
}

Divisor from_dense(const std::vector<long long>& dense) {
    Divisor d;
    for (size_t v = 0; v < dense.size(); ++v) d.add(PointRef::at_vertex(static_cast<VertexId>(v)), dense[v]);
    return d;
}

Divisor push_divisor(const Refinement& r, const Divisor& d) {
    Divisor out;
    for (const auto& [p, c] : d.entries()) out.add(r.push(p), c);
    return out;
}

Divisor pull_divisor(const Refinement& r, const Divisor& d) {
    Divisor out;
    for (const auto& [p, c] : d.entries()) out.add(r.pull(p), c);
    return out;
}

PLFunction PLFunction::constant(const Model& m, const Rational& c) {
    PLFunction f;
    f.tracks.resize(static_cast<size_t>(m.edge_count()));
    for (EdgeId e = 0; e < m.edge_count(); ++e) {
        f.tracks[static_cast<size_t>(e)].offsets = {Rational(0), m.edge(e).length};
        f.tracks[static_cast<size_t>(e)].values = {c, c};
    }
    return f;
}

Rational PLFunction::value_at(const Model& m, const PointRef& p) const {
    if (p.is_vertex()) {
        if (m.incident(p.vertex).empty()) return Rational(0);
        auto [e, end] = m.incident(p.vertex).front();
        const Track& t = tracks[static_cast<size_t>(e)];
        return end == 0 ? t.values.front() : t.values.back();
    }
    const Track& t = tracks[static_cast<size_t>(p.edge)];
    for (size_t i = 0; i + 1 < t.offsets.size(); ++i) {
        if (p.offset >= t.offsets[i] && p.offset <= t.offsets[i + 1]) {
            Rational slope = (t.values[i + 1] - t.values[i]) / (t.offsets[i + 1] - t.offsets[i]);
            return t.values[i] + slope * (p.offset - t.offsets[i]);
        }
    }
    fail(Errc::InvalidPoint, "point " + p.str() + " outside PL track");
}

PLFunction operator+(const PLFunction& f, const PLFunction& g) {
    if (f.tracks.size() != g.tracks.size()) fail(Errc::InvalidSpec, "PL sum over different edge sets");
    PLFunction h;
    h.tracks.resize(f.tracks.size());
    for (size_t e = 0; e < f.tracks.size(); ++e) {
        std::vector<Rational> off = f.tracks[e].offsets;
        off.insert(off.end(), g.tracks[e].offsets.begin(), g.tracks[e].offsets.end());
        std::sort(off.begin(), off.end());
        off.erase(std::unique(off.begin(), off.end()), off.end());
        auto eval = [](const PLFunction::Track& t, const Rational& x) {
            for (size_t i = 0; i + 1 < t.offsets.size(); ++i)
                if (x >= t.offsets[i] && x <= t.offsets[i + 1]) {
                    Rational slope = (t.values[i + 1] - t.values[i]) / (t.offsets[i + 1] - t.offsets[i]);
                    return t.values[i] + slope * (x - t.offsets[i]);
                }
            fail(Errc::InvalidPoint, "offset outside PL track");
        };
        for (const Rational& x : off) {
            h.tracks[e].offsets.push_back(x);
            h.tracks[e].values.push_back(eval(f.tracks[e], x) + eval(g.tracks[e], x));
        }
    }
    return h;
}

void validate_pl(const PLFunction& f, const Model& m) {
    if (static_cast<int>(f.tracks.size()) != m.edge_count())
        fail(Errc::InvalidSpec, "PL function tracks " + std::to_string(f.tracks.size()) + " of " +
                                    std::to_string(m.edge_count()) + " edges");
    for (EdgeId e = 0; e < m.edge_count(); ++e) {
        const auto& t = f.tracks[static_cast<size_t>(e)];
        if (t.offsets.size() < 2 || t.offsets.size() != t.values.size())
            fail(Errc::InvalidSpec, "PL track on edge " + std::to_string(e) + " malformed");
        if (t.offsets.front() != Rational(0) || t.offsets.back() != m.edge(e).length)
            fail(Errc::InvalidSpec, "PL track on edge " + std::to_string(e) + " does not span the edge");
        for (size_t i = 0; i + 1 < t.offsets.size(); ++i) {
            if (!(t.offsets[i] < t.offsets[i + 1]))
                fail(Errc::InvalidSpec, "PL track offsets not increasing on edge " + std::to_string(e));
            Rational slope = (t.values[i + 1] - t.values[i]) / (t.offsets[i + 1] - t.offsets[i]);
            if (!slope.is_integer())
                fail(Errc::NonIntegerSlope,
                     "edge " + std::to_string(e) + " segment " + std::to_string(i) + " slope " + slope.str());
        }
    }
    for (VertexId v = 0; v < m.vertex_count(); ++v) {
        const auto& inc = m.incident(v);
        if (inc.empty()) continue;
        auto value_at_end = [&](std::pair<EdgeId, int> ie) {
            const auto& t = f.tracks[static_cast<size_t>(ie.first)];
            return ie.second == 0 ? t.values.front() : t.values.back();
        };
        Rational v0 = value_at_end(inc.front());
        for (const auto& ie : inc)
            if (value_at_end(ie) != v0)
                fail(Errc::DiscontinuousAtVertex, "vertex " + std::to_string(v));
    }
}

Divisor div_of_function(const PLFunction& f, const Model& m) {
    validate_pl(f, m);
    Divisor d;
    for (EdgeId e = 0; e < m.edge_count(); ++e) {
        const auto& t = f.tracks[static_cast<size_t>(e)];
        std::vector<long long> slopes;
        for (size_t i = 0; i + 1 < t.offsets.size(); ++i)
            slopes.push_back(((t.values[i + 1] - t.values[i]) / (t.offsets[i + 1] - t.offsets[i])).to_integer());
        d.add(PointRef::at_vertex(m.edge(e).u), slopes.front());
        d.add(PointRef::at_vertex(m.edge(e).v), -slopes.back());
        for (size_t i = 1; i + 1 < t.offsets.size(); ++i)
            d.add(PointRef::on_edge(e, t.offsets[i]), slopes[i] - slopes[i - 1]);
    }
    return d;
}

PLFunction push_pl(const Refinement& r, const PLFunction& f, const Model& refined) {
    if (r.scale != Rational(1)) fail(Errc::InvalidSpec, "push_pl requires a non-scaling refinement");
    PLFunction g;
    g.tracks.resize(static_cast<size_t>(refined.edge_count()));
    auto eval = [](const PLFunction::Track& t, const Rational& x) {
        for (size_t i = 0; i + 1 < t.offsets.size(); ++i)
            if (x >= t.offsets[i] && x <= t.offsets[i + 1]) {
                Rational slope = (t.values[i + 1] - t.values[i]) / (t.offsets[i + 1] - t.offsets[i]);
                return t.values[i] + slope * (x - t.offsets[i]);
            }
        fail(Errc::InvalidPoint, "offset outside PL track");
    };
    for (EdgeId ne = 0; ne < refined.edge_count(); ++ne) {
        const auto& [oe, lo, hi] = r.edge_origin[static_cast<size_t>(ne)];
        const auto& t = f.tracks[static_cast<size_t>(oe)];
        auto& out = g.tracks[static_cast<size_t>(ne)];
        out.offsets.push_back(Rational(0));
        out.values.push_back(eval(t, lo));
        for (size_t i = 0; i < t.offsets.size(); ++i) {
            const Rational& x = t.offsets[i];
            if (x > lo && x < hi) {
                out.offsets.push_back(x - lo);
                out.values.push_back(t.values[i]);
            }
        }
        out.offsets.push_back(hi - lo);
        out.values.push_back(eval(t, hi));
    }
    return g;
}

}  // namespace tropdiv
