#pragma once

#include <set>
#include <vector>

#include "tropdiv/divisor.hpp"
#include "tropdiv/model.hpp"

namespace tropdiv {

// Net number of firings per vertex, normalized so the sink fires 0 times.
// Applying it via the Laplacian replays the reduction.
struct FiringScript {
    VertexId sink = 0;
    std::vector<long long> counts;
};

struct ReductionResult {
    Divisor reduced;
    FiringScript script;
    VertexId sink = 0;
};

// Loopless arc-list view of a model used by the chip-firing kernels.  Loops
// are dropped: firing across a loop is a no-op and a loop never helps burn
// its own vertex.
struct FiniteGraph {
    int n = 0;
    std::vector<int> xadj;  // CSR offsets, size n+1
    std::vector<int> adj;   // arc targets; every non-loop edge appears twice

    static FiniteGraph from_model(const Model& m);
    int degree(int v) const { return xadj[static_cast<size_t>(v) + 1] - xadj[static_cast<size_t>(v)]; }
};

// Reduction engine with reusable scratch buffers.  One instance per thread.
class Reducer {
public:
    Reducer(const Model& m, VertexId sink);
    Reducer(FiniteGraph g, VertexId sink);

    VertexId sink() const { return sink_; }
    const FiniteGraph& graph() const { return g_; }

    // Dhar's burning from the sink; requires d >= 0 off the sink.
    // Returns true when everything burns (d is sink-reduced if also >= 0 off sink).
    bool burn(const std::vector<long long>& d);
    const std::vector<char>& last_burnt() const { return burnt_; }

    // Brings d to the unique sink-reduced representative of its class.
    // If script is non-null it receives the net firing counts (sink pinned to 0).
    void reduce(std::vector<long long>& d, std::vector<long long>* script = nullptr);

private:
    void ensure_nonnegative(std::vector<long long>& d, std::vector<long long>* script);

    FiniteGraph g_;
    VertexId sink_;
    std::vector<int> dist_;                   // BFS distance from sink
    std::vector<std::vector<int>> shells_;    // vertices per distance
    std::vector<int> out_shell_;              // arcs from v to the previous shell
    std::vector<char> burnt_;
    std::vector<long long> burn_count_;
    std::vector<int> queue_;
};

// D - Laplacian * script (loops ignored); the replay primitive used by
// certificates and the brute-force oracle.
std::vector<long long> apply_script(const Model& m, const std::vector<long long>& dense,
                                    const std::vector<long long>& script);

std::set<VertexId> dhar_burnt_set(const Model& m, const Divisor& d, VertexId q);
bool is_q_reduced(const Model& m, const Divisor& d, VertexId q);
ReductionResult q_reduce(const Model& m, const Divisor& d, VertexId q);

// Metric-side operations.
bool is_p_reduced(const Model& m, const Divisor& d, const PointRef& p);

inline constexpr long long kDefaultMaxSubdiv = 2'000'000;

// Refine at the given points, optionally split loops, then unit-subdivide:
// the route from metric-graph divisors to finite chip-firing.  `total` maps
// the original model onto the unit one.
struct UnitBridge {
    Model model;
    Refinement total;
    long long scale;
};
UnitBridge bridge_to_unit(const Model& m, const std::vector<PointRef>& pts, bool loopless,
                          long long max_subdiv = kDefaultMaxSubdiv);
Divisor p_reduce_metric(const Model& m, const Divisor& d, const PointRef& p,
                        long long max_subdiv = kDefaultMaxSubdiv);

// Lemma-2 move: pushes some chips of a non-reduced effective divisor onto a
// vertex, staying in the divisor class.
Divisor move_to_vertex(const Model& m, const Divisor& d, const PointRef& p);

// Lemma-1 test: true iff d is p-reduced for every point of the graph.
bool is_singleton_system(const Model& m, const Divisor& d);

}  // namespace tropdiv
