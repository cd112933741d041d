#include "xlate/metrics/trajectory_graph.hpp"

#include <algorithm>
#include <map>

namespace xlate::metrics {

namespace {

std::string primary_file(const nlohmann::json& data) {
    if (data.contains("args") && data["args"].is_object()) {
        const auto& args = data["args"];
        if (args.contains("file") && args["file"].is_string()) return args["file"];
        if (args.contains("path") && args["path"].is_string()) return args["path"];
    }
    if (data.contains("file") && data["file"].is_string()) return data["file"];
    return "";
}

} // namespace

TrajectoryGraph build_trajectory_graph(const llm::Trajectory& t) {
    TrajectoryGraph g;
    std::vector<TrajNode> walk;
    std::vector<TrajNode> session;

    auto close_session = [&]() {
        if (!session.empty()) {
            g.sessions.push_back(std::move(session));
            session.clear();
        }
    };

    for (const auto& e : t.events) {
        if (e.kind == "phase") {
            close_session();
            continue;
        }
        if (e.kind == "end") break;
        TrajNode node;
        node.kind = e.kind;
        if (e.kind == "tool") {
            node.actor = e.data.value("tool", "");
            node.file = primary_file(e.data);
        } else if (e.kind == "turn") {
            node.actor = e.data.value("agent", "");
        } else {
            continue; // unknown event kinds are not part of the walk
        }
        walk.push_back(node);
        session.push_back(std::move(node));
    }
    close_session();

    // Distinct nodes, first-appearance order.
    for (const auto& n : walk) {
        if (std::find(g.nodes.begin(), g.nodes.end(), n) == g.nodes.end()) {
            g.nodes.push_back(n);
        }
    }

    // Structural edges: unordered pairs of distinct nodes on the same file.
    for (size_t i = 0; i < g.nodes.size(); ++i) {
        for (size_t j = i + 1; j < g.nodes.size(); ++j) {
            if (g.nodes[i].file.empty()) continue;
            if (g.nodes[i].file != g.nodes[j].file) continue;
            auto a = g.nodes[i], b = g.nodes[j];
            if (b < a) std::swap(a, b);
            g.structural_edges.push_back({a, b});
        }
    }

    // Loops: consecutive occurrences of the same node along the walk.
    std::map<TrajNode, size_t> last_seen;
    for (size_t i = 0; i < walk.size(); ++i) {
        auto it = last_seen.find(walk[i]);
        if (it != last_seen.end()) {
            g.loops.push_back({walk[i], static_cast<int>(i - it->second)});
        }
        last_seen[walk[i]] = i;
    }
    return g;
}

TrajectoryMetrics trajectory_metrics(const TrajectoryGraph& g) {
    TrajectoryMetrics m;
    m.nc = static_cast<long>(g.nodes.size());
    for (const auto& s : g.sessions) {
        if (s.size() > 1) m.tec += static_cast<long>(s.size() - 1);
    }
    m.sec = static_cast<long>(g.structural_edges.size());
    m.lc = static_cast<long>(g.loops.size());
    if (m.lc > 0) {
        double sum = 0.0;
        for (const auto& l : g.loops) sum += l.length;
        m.all = sum / static_cast<double>(m.lc);
    }
    return m;
}

} // namespace xlate::metrics
