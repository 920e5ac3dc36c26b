#include "lced/case.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "lced/errors.hpp"
#include "lced/util.hpp"

namespace lced {

std::string to_string(UnitKind kind) {
    switch (kind) {
        case UnitKind::thermal: return "thermal";
        case UnitKind::gas: return "gas";
        case UnitKind::hydro: return "hydro";
        case UnitKind::nuclear: return "nuclear";
        case UnitKind::wind: return "wind";
        case UnitKind::pv: return "pv";
        case UnitKind::other: return "other";
    }
    return "other";
}

UnitKind unit_kind_from_string(const std::string& s) {
    if (s == "thermal") return UnitKind::thermal;
    if (s == "gas") return UnitKind::gas;
    if (s == "hydro") return UnitKind::hydro;
    if (s == "nuclear") return UnitKind::nuclear;
    if (s == "wind") return UnitKind::wind;
    if (s == "pv") return UnitKind::pv;
    if (s == "other") return UnitKind::other;
    throw DataError("unknown unit kind '" + s + "'");
}

double CaseData::load(int node_id, int t) const {
    auto it = load_map.find({node_id, t});
    return it == load_map.end() ? 0.0 : it->second;
}

double CaseData::availability(int unit_id, int t) const {
    auto it = avail_map.find({unit_id, t});
    return it == avail_map.end() ? 1.0 : it->second;
}

double CaseData::total_load(int t) const {
    double sum = 0.0;
    for (const auto& [key, mw] : load_map)
        if (key.second == t) sum += mw;
    return sum;
}

int CaseData::unit_index(int unit_id) const {
    for (size_t i = 0; i < units.size(); ++i)
        if (units[i].id == unit_id) return static_cast<int>(i);
    return -1;
}

std::pair<double, double> effective_unit_bounds(const CaseData& c, int unit_id, int t) {
    int idx = c.unit_index(unit_id);
    if (idx < 0) throw std::invalid_argument("unknown unit id " + std::to_string(unit_id));
    if (t < 0 || t >= c.horizon)
        throw std::invalid_argument("period " + std::to_string(t) + " outside horizon");
    const Unit& u = c.units[idx];
    double hi = c.availability(unit_id, t) * u.p_max;
    double lo = std::min(u.p_min, hi);
    return {lo, hi};
}

std::vector<int> ac_islands(const CaseData& c) {
    const int n = static_cast<int>(c.nodes.size());
    std::vector<int> comp(n, -1);
    std::vector<std::vector<int>> adj(n);
    for (const auto& l : c.ac_lines) {
        adj[l.from_node].push_back(l.to_node);
        adj[l.to_node].push_back(l.from_node);
    }
    int next = 0;
    std::vector<int> stack;
    for (int s = 0; s < n; ++s) {
        if (comp[s] >= 0) continue;
        comp[s] = next;
        stack.push_back(s);
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int w : adj[v])
                if (comp[w] < 0) {
                    comp[w] = next;
                    stack.push_back(w);
                }
        }
        ++next;
    }
    return comp;
}

namespace {

struct CsvRow {
    std::vector<std::string> fields;
    int line = 0;
};

/// Minimal comma-separated reader: header row required, no quoting, blank
/// lines skipped.
class CsvFile {
public:
    CsvFile(const std::filesystem::path& path, const std::vector<std::string>& header)
        : name_(path.filename().string()) {
        std::ifstream in(path);
        if (!in) throw DataError("missing file " + name_);
        std::string line;
        int lineno = 0;
        bool saw_header = false;
        while (std::getline(in, line)) {
            ++lineno;
            while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
            if (line.empty()) continue;
            auto fields = split(line);
            if (!saw_header) {
                if (fields != header)
                    throw DataError(name_, lineno,
                                    "bad header, expected '" + join(header) + "' got '" + line + "'");
                saw_header = true;
                continue;
            }
            if (fields.size() != header.size())
                throw DataError(name_, lineno,
                                "expected " + std::to_string(header.size()) + " fields, got " +
                                    std::to_string(fields.size()));
            rows_.push_back({std::move(fields), lineno});
        }
        if (!saw_header) throw DataError(name_, 0, "empty file, header row required");
    }

    const std::vector<CsvRow>& rows() const { return rows_; }
    const std::string& name() const { return name_; }

    int to_int(const CsvRow& row, int col) const {
        const std::string& s = row.fields[col];
        int value = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
        if (ec != std::errc{} || ptr != s.data() + s.size())
            throw DataError(name_, row.line, "malformed integer '" + s + "'");
        return value;
    }

    double to_double(const CsvRow& row, int col) const {
        const std::string& s = row.fields[col];
        if (s.empty()) throw DataError(name_, row.line, "empty numeric field");
        char* end = nullptr;
        double value = std::strtod(s.c_str(), &end);
        if (end != s.c_str() + s.size() || !std::isfinite(value))
            throw DataError(name_, row.line, "malformed number '" + s + "'");
        return value;
    }

private:
    static std::vector<std::string> split(const std::string& line) {
        std::vector<std::string> out;
        std::string cur;
        for (char ch : line) {
            if (ch == ',') {
                out.push_back(cur);
                cur.clear();
            } else {
                cur.push_back(ch);
            }
        }
        out.push_back(cur);
        return out;
    }

    static std::string join(const std::vector<std::string>& v) {
        std::string s;
        for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i];
        return s;
    }

    std::string name_;
    std::vector<CsvRow> rows_;
};

bool valid_node(const CaseData& c, int id) {
    return id >= 0 && id < static_cast<int>(c.nodes.size());
}

}  // namespace

CaseData load_case(const std::filesystem::path& case_dir) {
    CaseData c;

    {
        CsvFile f(case_dir / "nodes.csv", {"id", "name"});
        std::set<int> seen;
        for (const auto& row : f.rows()) {
            Node n;
            n.id = f.to_int(row, 0);
            n.name = row.fields[1];
            if (!seen.insert(n.id).second)
                throw DataError(f.name(), row.line, "duplicate node id " + std::to_string(n.id));
            c.nodes.push_back(n);
        }
        std::sort(c.nodes.begin(), c.nodes.end(), [](const Node& a, const Node& b) { return a.id < b.id; });
        for (size_t i = 0; i < c.nodes.size(); ++i)
            if (c.nodes[i].id != static_cast<int>(i))
                throw DataError(f.name(), 0, "node ids must be contiguous from 0");
    }

    {
        CsvFile f(case_dir / "units.csv",
                  {"id", "node_id", "kind", "cost", "emission", "pmin_mw", "pmax_mw"});
        std::set<int> seen;
        for (const auto& row : f.rows()) {
            Unit u;
            u.id = f.to_int(row, 0);
            u.node_id = f.to_int(row, 1);
            try {
                u.kind = unit_kind_from_string(row.fields[2]);
            } catch (const DataError& e) {
                throw DataError(f.name(), row.line, e.what());
            }
            u.cost_coeff = f.to_double(row, 3);
            u.emission_coeff = f.to_double(row, 4);
            u.p_min = f.to_double(row, 5);
            u.p_max = f.to_double(row, 6);
            if (!seen.insert(u.id).second)
                throw DataError(f.name(), row.line, "duplicate unit id " + std::to_string(u.id));
            if (!valid_node(c, u.node_id))
                throw DataError(f.name(), row.line,
                                "unit " + std::to_string(u.id) + " references nonexistent node " +
                                    std::to_string(u.node_id));
            if (u.cost_coeff < 0) throw DataError(f.name(), row.line, "cost must be >= 0");
            if (u.emission_coeff < 0) throw DataError(f.name(), row.line, "emission must be >= 0");
            if (u.p_min < 0 || u.p_min > u.p_max)
                throw DataError(f.name(), row.line, "need 0 <= pmin_mw <= pmax_mw");
            c.units.push_back(u);
        }
        std::sort(c.units.begin(), c.units.end(), [](const Unit& a, const Unit& b) { return a.id < b.id; });
    }

    {
        CsvFile f(case_dir / "ac_lines.csv", {"id", "from", "to", "susceptance_pu", "capacity_mw"});
        std::set<int> seen;
        for (const auto& row : f.rows()) {
            AcLine l;
            l.id = f.to_int(row, 0);
            l.from_node = f.to_int(row, 1);
            l.to_node = f.to_int(row, 2);
            l.susceptance = f.to_double(row, 3);
            l.capacity = f.to_double(row, 4);
            if (!seen.insert(l.id).second)
                throw DataError(f.name(), row.line, "duplicate ac line id " + std::to_string(l.id));
            if (!valid_node(c, l.from_node) || !valid_node(c, l.to_node))
                throw DataError(f.name(), row.line,
                                "ac line " + std::to_string(l.id) + " references nonexistent node");
            if (l.from_node == l.to_node)
                throw DataError(f.name(), row.line, "ac line endpoints must differ");
            if (l.susceptance <= 0) throw DataError(f.name(), row.line, "susceptance_pu must be > 0");
            if (l.capacity <= 0) throw DataError(f.name(), row.line, "capacity_mw must be > 0");
            c.ac_lines.push_back(l);
        }
        std::sort(c.ac_lines.begin(), c.ac_lines.end(),
                  [](const AcLine& a, const AcLine& b) { return a.id < b.id; });
    }

    {
        CsvFile f(case_dir / "dc_lines.csv", {"id", "from", "to", "capacity_mw"});
        std::set<int> seen;
        for (const auto& row : f.rows()) {
            DcLine l;
            l.id = f.to_int(row, 0);
            l.from_node = f.to_int(row, 1);
            l.to_node = f.to_int(row, 2);
            l.capacity = f.to_double(row, 3);
            if (!seen.insert(l.id).second)
                throw DataError(f.name(), row.line, "duplicate dc line id " + std::to_string(l.id));
            if (!valid_node(c, l.from_node) || !valid_node(c, l.to_node))
                throw DataError(f.name(), row.line,
                                "dc line " + std::to_string(l.id) + " references nonexistent node");
            if (l.from_node == l.to_node)
                throw DataError(f.name(), row.line, "dc line endpoints must differ");
            if (l.capacity <= 0) throw DataError(f.name(), row.line, "capacity_mw must be > 0");
            c.dc_lines.push_back(l);
        }
        std::sort(c.dc_lines.begin(), c.dc_lines.end(),
                  [](const DcLine& a, const DcLine& b) { return a.id < b.id; });
    }

    int max_t = 0;
    {
        CsvFile f(case_dir / "load.csv", {"node_id", "t", "load_mw"});
        for (const auto& row : f.rows()) {
            int node = f.to_int(row, 0);
            int t = f.to_int(row, 1);
            double mw = f.to_double(row, 2);
            if (!valid_node(c, node))
                throw DataError(f.name(), row.line,
                                "load references nonexistent node " + std::to_string(node));
            if (t < 0) throw DataError(f.name(), row.line, "t must be >= 0");
            if (!c.load_map.emplace(std::make_pair(node, t), mw).second)
                throw DataError(f.name(), row.line, "duplicate load entry for node " +
                                                        std::to_string(node) + ", t " + std::to_string(t));
            max_t = std::max(max_t, t);
        }
    }

    if (std::filesystem::exists(case_dir / "availability.csv")) {
        CsvFile f(case_dir / "availability.csv", {"unit_id", "t", "factor"});
        for (const auto& row : f.rows()) {
            int unit = f.to_int(row, 0);
            int t = f.to_int(row, 1);
            double factor = f.to_double(row, 2);
            if (c.unit_index(unit) < 0)
                throw DataError(f.name(), row.line,
                                "availability references nonexistent unit " + std::to_string(unit));
            if (t < 0) throw DataError(f.name(), row.line, "t must be >= 0");
            if (factor < 0.0 || factor > 1.0)
                throw DataError(f.name(), row.line, "factor must be in [0, 1]");
            if (!c.avail_map.emplace(std::make_pair(unit, t), factor).second)
                throw DataError(f.name(), row.line, "duplicate availability entry for unit " +
                                                        std::to_string(unit) + ", t " + std::to_string(t));
            max_t = std::max(max_t, t);
        }
    }

    c.horizon = max_t + 1;

    double fleet_max = 0.0;
    for (const auto& u : c.units) fleet_max += u.p_max;
    double peak = 0.0;
    for (int t = 0; t < c.horizon; ++t) peak = std::max(peak, c.total_load(t));
    if (fleet_max < peak) {
        std::ostringstream msg;
        msg << "total unit capacity " << format_value(fleet_max) << " MW below peak load "
            << format_value(peak) << " MW";
        c.warnings.push_back(msg.str());
    }

    return c;
}

void save_case(const CaseData& c, const std::filesystem::path& case_dir) {
    std::filesystem::create_directories(case_dir);
    auto open = [&](const char* name) {
        std::ofstream out(case_dir / name, std::ios::trunc);
        if (!out) throw DataError(std::string("cannot write ") + name);
        return out;
    };

    {
        auto out = open("nodes.csv");
        out << "id,name\n";
        for (const auto& n : c.nodes) out << n.id << "," << n.name << "\n";
    }
    {
        auto out = open("units.csv");
        out << "id,node_id,kind,cost,emission,pmin_mw,pmax_mw\n";
        for (const auto& u : c.units)
            out << u.id << "," << u.node_id << "," << to_string(u.kind) << ","
                << format_exact(u.cost_coeff) << "," << format_exact(u.emission_coeff) << ","
                << format_exact(u.p_min) << "," << format_exact(u.p_max) << "\n";
    }
    {
        auto out = open("ac_lines.csv");
        out << "id,from,to,susceptance_pu,capacity_mw\n";
        for (const auto& l : c.ac_lines)
            out << l.id << "," << l.from_node << "," << l.to_node << ","
                << format_exact(l.susceptance) << "," << format_exact(l.capacity) << "\n";
    }
    {
        auto out = open("dc_lines.csv");
        out << "id,from,to,capacity_mw\n";
        for (const auto& l : c.dc_lines)
            out << l.id << "," << l.from_node << "," << l.to_node << "," << format_exact(l.capacity)
                << "\n";
    }
    {
        auto out = open("load.csv");
        out << "node_id,t,load_mw\n";
        for (const auto& [key, mw] : c.load_map)
            out << key.first << "," << key.second << "," << format_exact(mw) << "\n";
    }
    {
        auto out = open("availability.csv");
        out << "unit_id,t,factor\n";
        for (const auto& [key, factor] : c.avail_map)
            out << key.first << "," << key.second << "," << format_exact(factor) << "\n";
    }
}

CaseData builtin_case(const std::string& name) {
    std::string key;
    for (char ch : name) key.push_back(static_cast<char>(std::tolower(ch)));

    CaseData c;
    if (key == "toya") {
        c.nodes = {{0, "n0"}};
        c.units = {{0, 0, UnitKind::thermal, 10.0, 1.0, 0.0, 100.0}};
        c.load_map[{0, 0}] = 50.0;
        c.horizon = 1;
    } else if (key == "toyb") {
        c.nodes = {{0, "n0"}};
        c.units = {{0, 0, UnitKind::thermal, 10.0, 1.0, 0.0, 100.0},
                   {1, 0, UnitKind::gas, 50.0, 0.2, 0.0, 100.0}};
        c.load_map[{0, 0}] = 100.0;
        c.horizon = 1;
    } else if (key == "toyc") {
        c.nodes = {{0, "n0"}, {1, "n1"}, {2, "n2"}};
        c.units = {{0, 0, UnitKind::thermal, 10.0, 1.0, 0.0, 200.0},
                   {1, 1, UnitKind::gas, 50.0, 0.2, 0.0, 200.0},
                   {2, 2, UnitKind::other, 30.0, 0.5, 0.0, 60.0}};
        c.ac_lines = {{0, 0, 2, 10.0, 80.0}, {1, 1, 2, 10.0, 120.0}, {2, 0, 1, 10.0, 50.0}};
        c.load_map[{2, 0}] = 150.0;
        c.load_map[{2, 1}] = 110.0;
        c.horizon = 2;
    } else {
        throw DataError("unknown built-in case '" + name + "' (expected toyA, toyB or toyC)");
    }
    return c;
}

}  // namespace lced
