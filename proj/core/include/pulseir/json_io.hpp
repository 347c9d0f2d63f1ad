#pragma once

#include "pulseir/schedule.hpp"
#include "pulseir/targets.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace pulseir {

inline constexpr int kSchemaVersion = 1;

// A parsed input file: either a single graph or a finalized schedule.
struct Document {
    NodePtr graph;                    // set for graph documents
    std::optional<ChannelMap> schedule; // set for schedule documents

    bool is_schedule() const noexcept { return schedule.has_value(); }
};

/// Parses a graph document ({"kind": ...}) or a schedule document
/// ({"channels": [...], "body": {...}}). Either may carry a top-level
/// "defs" object whose entries are referenced as {"ref": "name"} to share
/// subgraphs. Errors are reported as ErrorCode::Parse (or the construction
/// error) with the line or field where they occurred.
Document parse_document(std::string_view text);
Document load_document(const std::filesystem::path &path);

/// Parses a single node. Bare numbers are Num.
NodePtr parse_node(std::string_view text);

/// Canonical JSON form of a graph: full kind names, parameter labels as
/// keys. Shared subgraphs are written out at every use.
std::string node_to_json(const NodePtr &node, int indent = -1);

/// JSON array of {duration_s, frequency_hz, amplitude, phase_rad,
/// phase_mode[, ref_phase_rad]}.
std::string dds_to_json(const std::vector<DdsSegment> &segments, int indent = 2);

} // namespace pulseir
