#pragma once

#include "xlate/llm/trajectory.hpp"

#include <string>
#include <utility>
#include <vector>

namespace xlate::metrics {

// Version stamp for the trajectory abstraction below. The numbers it yields
// are comparable only within one version, so every report carries it.
inline constexpr const char* kTrajectoryAbstraction = "abstraction v1";

// One abstracted trajectory node. Walk events collapse into nodes by
// (kind, actor, file):
//   - "tool" events: actor = tool name, file = the tool's primary file
//     argument (args.file, else args.path, else "");
//   - "turn" events: actor = agent name, file = "".
// "phase" events are session boundaries, not nodes; the terminal "end"
// event is not part of the walk.
struct TrajNode {
    std::string kind;
    std::string actor;
    std::string file;

    bool operator==(const TrajNode&) const = default;
    auto operator<=>(const TrajNode&) const = default;
};

// A revisit of `node`: two consecutive occurrences of the same node in the
// walk, `length` positions apart (adjacent repeats have length 1).
struct TrajLoop {
    TrajNode node;
    int length = 0;

    bool operator==(const TrajLoop&) const = default;
};

struct TrajectoryGraph {
    // The abstracted walk, split into sessions at phase markers. Temporal
    // edges connect consecutive events within a session, so each session
    // contributes (size - 1) edges; sessions are never empty.
    std::vector<std::vector<TrajNode>> sessions;

    // Distinct nodes in first-appearance order.
    std::vector<TrajNode> nodes;

    // Unordered pairs of distinct nodes sharing a nonempty file (stored
    // with first < second).
    std::vector<std::pair<TrajNode, TrajNode>> structural_edges;

    // Revisits along the whole walk, session boundaries notwithstanding,
    // in order of the closing occurrence.
    std::vector<TrajLoop> loops;
};

TrajectoryGraph build_trajectory_graph(const llm::Trajectory& t);

// The five scalars: node count, temporal edge count, structural edge
// count, loop count, and average loop length (0 when there are no loops).
struct TrajectoryMetrics {
    long nc = 0;
    long tec = 0;
    long sec = 0;
    long lc = 0;
    double all = 0.0;

    bool operator==(const TrajectoryMetrics&) const = default;
};

TrajectoryMetrics trajectory_metrics(const TrajectoryGraph& g);

} // namespace xlate::metrics
