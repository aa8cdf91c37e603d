#pragma once

// Per-edge Gillespie simulation on an arbitrary graph.
//
// Each vertex keeps its adjacency arcs partitioned by the colour of the far
// end, [white | red | blue], so a uniform white (or blue) neighbour is one
// index draw. Red vertices carry two weights in Fenwick trees: their white
// degree and their blue degree. The red-white edge class is sampled by
// drawing a red vertex proportional to white degree and then a uniform white
// neighbour, which is a uniform red-white edge. A colour change at u costs
// O(deg(u) log V).

#include "cewc/chain.hpp"
#include "cewc/graph.hpp"

#include <string>
#include <vector>

namespace cewc {

enum class VertexColor : std::uint8_t { White, Red, Blue };

struct GraphStepOutcome {
    EventKind event = EventKind::Grow;
    double holding_time = 0.0;
    Graph::Vertex changed = -1;
};

class GraphState {
public:
    using Vertex = Graph::Vertex;
    using Arc = Graph::Arc;

    /// All-white colouring of `graph`.
    explicit GraphState(const Graph& graph)
        : graph_{&graph},
          color_(static_cast<std::size_t>(graph.vertex_count()), VertexColor::White),
          slot_arc_(static_cast<std::size_t>(graph.arc_count())),
          arc_slot_(static_cast<std::size_t>(graph.arc_count())),
          white_end_(static_cast<std::size_t>(graph.vertex_count())),
          red_end_(static_cast<std::size_t>(graph.vertex_count())),
          red_white_(static_cast<std::size_t>(graph.vertex_count())),
          red_blue_(static_cast<std::size_t>(graph.vertex_count())),
          reds_(static_cast<std::size_t>(graph.vertex_count()))
    {
        for (Arc a = 0; a < graph.arc_count(); ++a) {
            slot_arc_[a] = a;
            arc_slot_[a] = a;
        }
        for (Vertex v = 0; v < graph.vertex_count(); ++v) {
            white_end_[v] = graph.offset(v) + graph.degree(v);
            red_end_[v] = white_end_[v];
        }
        white_count_ = graph.vertex_count();
    }

    /// Initial colouring for `params`: vertex 0 red; in Kortchemski mode
    /// vertex 1 is also blue.
    static GraphState initial(const Graph& graph, const Params& params)
    {
        if (graph.vertex_count() != params.vertex_count())
            throw invalid_params("graph has " + std::to_string(graph.vertex_count()) + " vertices but parameters need " +
                                 std::to_string(params.vertex_count()));
        GraphState s{graph};
        s.make_red(0);
        if (params.mode() == InitMode::Kortchemski) {
            s.make_red(1);
            s.make_blue(1);
        }
        return s;
    }

    const Graph& graph() const noexcept { return *graph_; }
    VertexColor color(Vertex v) const noexcept { return color_[v]; }
    std::int64_t red_white_edges() const noexcept { return red_white_.total(); }
    std::int64_t red_blue_edges() const noexcept { return red_blue_.total(); }
    std::int64_t red_count() const noexcept { return static_cast<std::int64_t>(reds_.size()); }
    std::int64_t white_count() const noexcept { return white_count_; }
    std::int64_t blue_count() const noexcept { return graph_->vertex_count() - white_count_ - red_count(); }
    PopulationState population() const noexcept { return {red_count(), blue_count(), white_count()}; }

    Arc white_degree(Vertex v) const noexcept { return white_end_[v] - graph_->offset(v); }
    Arc blue_degree(Vertex v) const noexcept { return graph_->offset(v) + graph_->degree(v) - red_end_[v]; }

    double total_rate(const Params& p) const noexcept
    {
        return p.lambda() * static_cast<double>(red_white_edges()) + static_cast<double>(red_blue_edges()) +
               p.conversion_rate() * static_cast<double>(red_count());
    }

    void make_red(Vertex u)
    {
        if (color_[u] != VertexColor::White) throw invalid_params("only a white vertex can turn red");
        color_[u] = VertexColor::Red;
        --white_count_;
        for (Arc a = graph_->offset(u), end = a + graph_->degree(u); a < end; ++a) {
            const Vertex v = graph_->target(a);
            const Arc back = graph_->reverse(a);
            swap_slots(back, white_end_[v] - 1);
            --white_end_[v];
            if (color_[v] == VertexColor::Red) red_white_.add(static_cast<std::size_t>(v), -1);
        }
        red_white_.set(static_cast<std::size_t>(u), white_degree(u));
        red_blue_.set(static_cast<std::size_t>(u), blue_degree(u));
        reds_.insert(static_cast<std::size_t>(u));
    }

    void make_blue(Vertex u)
    {
        if (color_[u] != VertexColor::Red) throw invalid_params("only a red vertex can turn blue");
        color_[u] = VertexColor::Blue;
        for (Arc a = graph_->offset(u), end = a + graph_->degree(u); a < end; ++a) {
            const Vertex v = graph_->target(a);
            const Arc back = graph_->reverse(a);
            swap_slots(back, red_end_[v] - 1);
            --red_end_[v];
            if (color_[v] == VertexColor::Red) red_blue_.add(static_cast<std::size_t>(v), 1);
        }
        red_white_.set(static_cast<std::size_t>(u), 0);
        red_blue_.set(static_cast<std::size_t>(u), 0);
        reds_.erase(static_cast<std::size_t>(u));
    }

    /// Draws and applies one event.
    template <BitGenerator G>
    GraphStepOutcome step(const Params& p, G& rng)
    {
        if (reds_.empty()) throw no_transition{};
        const double grow = p.lambda() * static_cast<double>(red_white_edges());
        const double chase = static_cast<double>(red_blue_edges());
        const double convert = p.conversion_rate() * static_cast<double>(red_count());
        const double total = grow + chase + convert;
        if (!(total > 0.0)) throw invalid_params("no enabled transitions");

        GraphStepOutcome out;
        const double pick = uniform_open(rng) * total;
        if (pick < grow) {
            const auto v = static_cast<Vertex>(red_white_.sample(rng));
            const auto k = static_cast<Arc>(uniform_index(rng, static_cast<std::uint64_t>(white_degree(v))));
            out.changed = graph_->target(slot_arc_[graph_->offset(v) + k]);
            out.event = EventKind::Grow;
            make_red(out.changed);
        } else if (pick < grow + chase || convert == 0.0) {
            const auto v = static_cast<Vertex>(red_blue_.sample(rng));
            out.changed = v;
            out.event = EventKind::Chase;
            make_blue(v);
        } else {
            out.changed = static_cast<Vertex>(reds_.sample(rng));
            out.event = EventKind::Convert;
            make_blue(out.changed);
        }
        out.holding_time = exponential(rng, total);
        return out;
    }

    /// Empty when the incremental bookkeeping matches a from-scratch recount.
    std::string bookkeeping_violation() const
    {
        std::int64_t rw = 0;
        std::int64_t rb = 0;
        std::int64_t reds = 0;
        std::int64_t whites = 0;
        for (Vertex v = 0; v < graph_->vertex_count(); ++v) {
            if (color_[v] == VertexColor::White) ++whites;
            Arc wd = 0;
            Arc bd = 0;
            const Arc lo = graph_->offset(v);
            const Arc hi = lo + graph_->degree(v);
            for (Arc slot = lo; slot < hi; ++slot) {
                const Arc a = slot_arc_[slot];
                if (arc_slot_[a] != slot || a < lo || a >= hi) return "slot map corrupted at vertex " + std::to_string(v);
                const VertexColor c = color_[graph_->target(a)];
                const VertexColor segment =
                    slot < white_end_[v] ? VertexColor::White : (slot < red_end_[v] ? VertexColor::Red : VertexColor::Blue);
                if (c != segment) return "neighbour in wrong segment at vertex " + std::to_string(v);
                wd += c == VertexColor::White;
                bd += c == VertexColor::Blue;
            }
            const bool red = color_[v] == VertexColor::Red;
            if (red != reds_.contains(static_cast<std::size_t>(v))) return "red set mismatch at vertex " + std::to_string(v);
            if (red_white_.weight(static_cast<std::size_t>(v)) != (red ? wd : 0)) return "red-white weight mismatch";
            if (red_blue_.weight(static_cast<std::size_t>(v)) != (red ? bd : 0)) return "red-blue weight mismatch";
            if (red) {
                ++reds;
                rw += wd;
                rb += bd;
            }
        }
        if (rw != red_white_edges()) return "red-white edge total mismatch";
        if (rb != red_blue_edges()) return "red-blue edge total mismatch";
        if (reds != red_count()) return "red count mismatch";
        if (whites != white_count_) return "white count mismatch";
        return {};
    }

private:
    void swap_slots(Arc arc, Arc slot)
    {
        const Arc from = arc_slot_[arc];
        const Arc other = slot_arc_[slot];
        slot_arc_[slot] = arc;
        slot_arc_[from] = other;
        arc_slot_[arc] = slot;
        arc_slot_[other] = from;
    }

    const Graph* graph_;
    std::vector<VertexColor> color_;
    std::vector<Arc> slot_arc_;
    std::vector<Arc> arc_slot_;
    std::vector<Arc> white_end_;
    std::vector<Arc> red_end_;
    WeightTree red_white_;
    WeightTree red_blue_;
    IndexedSet reds_;
    std::int64_t white_count_ = 0;
};

template <BitGenerator G>
GraphStepOutcome graph_step(GraphState& state, const Params& params, G& rng)
{
    return state.step(params, rng);
}

/// Runs from the initial colouring to fixation. With `check_bookkeeping`
/// the incremental counts are verified against a recount after every step.
template <BitGenerator G>
FixationResult run_graph_to_fixation(const Graph& graph, const Params& params, G& rng, bool check_bookkeeping = false)
{
    GraphState s = GraphState::initial(graph, params);
    FixationResult out;
    while (s.red_count() > 0) {
        const GraphStepOutcome o = s.step(params, rng);
        out.fixation_time += o.holding_time;
        ++out.jump_count;
        if (o.event == EventKind::Convert) ++out.conversions;
        if (check_bookkeeping) {
            if (auto err = s.bookkeeping_violation(); !err.empty()) throw std::logic_error("graph bookkeeping: " + err);
        }
    }
    out.white_survivors = s.white_count();
    out.blue_total = s.blue_count();
    return out;
}

} // namespace cewc
