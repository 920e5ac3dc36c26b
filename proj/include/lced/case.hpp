#ifndef LCED_CASE_HPP
#define LCED_CASE_HPP

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace lced {

struct Node {
    int id = 0;
    std::string name;

    friend bool operator==(const Node&, const Node&) = default;
};

enum class UnitKind { thermal, gas, hydro, nuclear, wind, pv, other };

std::string to_string(UnitKind kind);
UnitKind unit_kind_from_string(const std::string& s);

struct Unit {
    int id = 0;
    int node_id = 0;
    UnitKind kind = UnitKind::other;
    double cost_coeff = 0.0;      // currency per MWh
    double emission_coeff = 0.0;  // tons CO2 per MWh
    double p_min = 0.0;           // MW
    double p_max = 0.0;           // MW

    friend bool operator==(const Unit&, const Unit&) = default;
};

struct AcLine {
    int id = 0;
    int from_node = 0;
    int to_node = 0;
    double susceptance = 0.0;  // per unit on s_base
    double capacity = 0.0;     // MW, symmetric limit

    friend bool operator==(const AcLine&, const AcLine&) = default;
};

/// DC tie; flow direction is fixed from -> to, lower bound 0.
struct DcLine {
    int id = 0;
    int from_node = 0;
    int to_node = 0;
    double capacity = 0.0;  // MW

    friend bool operator==(const DcLine&, const DcLine&) = default;
};

/// Immutable grid description. Safe to share across worker threads once
/// loaded; nothing here mutates after load_case/builtin_case returns.
struct CaseData {
    std::vector<Node> nodes;
    std::vector<Unit> units;
    std::vector<AcLine> ac_lines;
    std::vector<DcLine> dc_lines;
    std::map<std::pair<int, int>, double> load_map;   // (node, t) -> MW, absent = 0
    std::map<std::pair<int, int>, double> avail_map;  // (unit, t) -> factor, absent = 1
    int horizon = 1;                                  // number of hourly periods T
    double s_base = 100.0;                            // MVA base for per-unit susceptances
    std::vector<std::string> warnings;                // non-fatal validation notes

    double load(int node_id, int t) const;
    double availability(int unit_id, int t) const;
    double total_load(int t) const;
    int unit_index(int unit_id) const;  // -1 if unknown

    bool operator==(const CaseData& o) const {
        return nodes == o.nodes && units == o.units && ac_lines == o.ac_lines &&
               dc_lines == o.dc_lines && load_map == o.load_map && avail_map == o.avail_map &&
               horizon == o.horizon && s_base == o.s_base;
    }
};

/// Load and validate a case directory (nodes.csv, units.csv, ac_lines.csv,
/// dc_lines.csv, load.csv, optional availability.csv). Throws DataError with
/// file and line on the first problem found.
CaseData load_case(const std::filesystem::path& case_dir);

/// Write `c` back out in load_case's schema; load_case(save_case(c)) == c.
void save_case(const CaseData& c, const std::filesystem::path& case_dir);

/// Per-period operating range of a unit: availability scales the upper
/// bound; the lower bound is clamped down when the scaled ceiling drops
/// below p_min. Always returns lo <= hi.
std::pair<double, double> effective_unit_bounds(const CaseData& c, int unit_id, int t);

/// AC-connected component id per node (DC ties do not merge components).
std::vector<int> ac_islands(const CaseData& c);

/// Built-in demo fixtures: "toyA", "toyB", "toyC" (case-insensitive).
CaseData builtin_case(const std::string& name);

}  // namespace lced

#endif
