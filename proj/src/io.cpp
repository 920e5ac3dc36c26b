#include "lced/io.hpp"

#include <fstream>
#include <ostream>

#include "lced/errors.hpp"
#include "lced/util.hpp"

namespace lced {

namespace {

void dump_value(const nlohmann::ordered_json& j, std::ostream& out, int indent, int depth) {
    const std::string pad(static_cast<size_t>(indent) * depth, ' ');
    const std::string pad_in(static_cast<size_t>(indent) * (depth + 1), ' ');
    switch (j.type()) {
        case nlohmann::json::value_t::object: {
            if (j.empty()) {
                out << "{}";
                return;
            }
            out << "{\n";
            size_t k = 0;
            for (auto it = j.begin(); it != j.end(); ++it, ++k) {
                out << pad_in << nlohmann::json(it.key()).dump() << ": ";
                dump_value(it.value(), out, indent, depth + 1);
                out << (k + 1 < j.size() ? ",\n" : "\n");
            }
            out << pad << "}";
            return;
        }
        case nlohmann::json::value_t::array: {
            if (j.empty()) {
                out << "[]";
                return;
            }
            out << "[\n";
            for (size_t k = 0; k < j.size(); ++k) {
                out << pad_in;
                dump_value(j[k], out, indent, depth + 1);
                out << (k + 1 < j.size() ? ",\n" : "\n");
            }
            out << pad << "]";
            return;
        }
        case nlohmann::json::value_t::number_float:
            out << format_value(j.get<double>());
            return;
        default:
            out << j.dump();
            return;
    }
}

}  // namespace

void write_json(const nlohmann::ordered_json& j, std::ostream& out, int indent) {
    dump_value(j, out, indent, 0);
    out << "\n";
}

void write_json_file(const nlohmann::ordered_json& j, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot write " + path.string());
    write_json(j, out);
}

void write_dispatch_csv(const HorizonDispatch& hd, const CaseData& c,
                        const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot write " + path.string());
    out << "t,element,id,value\n";
    for (const auto& pd : hd.periods) {
        for (size_t u = 0; u < c.units.size(); ++u)
            out << pd.t << ",unit," << c.units[u].id << "," << format_value(pd.unit_output[u])
                << "\n";
        for (size_t l = 0; l < c.ac_lines.size(); ++l)
            out << pd.t << ",ac_line," << c.ac_lines[l].id << "," << format_value(pd.ac_flows[l])
                << "\n";
        for (size_t l = 0; l < c.dc_lines.size(); ++l)
            out << pd.t << ",dc_line," << c.dc_lines[l].id << "," << format_value(pd.dc_flows[l])
                << "\n";
        for (size_t nd = 0; nd < c.nodes.size(); ++nd)
            out << pd.t << ",node_angle," << c.nodes[nd].id << "," << format_value(pd.angles[nd])
                << "\n";
    }
}

void write_regions_csv(const std::vector<CriticalRegion>& regions,
                       const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot write " + path.string());
    out << "lambda_lo,lambda_hi,value_alpha,value_beta\n";
    for (const auto& r : regions)
        out << format_value(r.theta_lo) << "," << format_value(r.theta_hi) << ","
            << format_value(r.alpha) << "," << format_value(r.beta) << "\n";
}

nlohmann::ordered_json solve_result_json(const HorizonDispatch& hd, double lambda,
                                         const Norms& norms) {
    nlohmann::ordered_json j;
    j["command"] = "solve";
    j["lambda"] = lambda;
    j["norms"] = {{"cost", norms.cost}, {"emissions", norms.emissions}};
    j["total_cost"] = hd.total_cost;
    j["total_emissions"] = hd.total_emissions;
    j["scalarized"] = lambda * hd.total_cost / norms.cost +
                      (1.0 - lambda) * hd.total_emissions / norms.emissions;
    nlohmann::ordered_json periods = nlohmann::ordered_json::array();
    for (const auto& pd : hd.periods) {
        periods.push_back(
            {{"t", pd.t}, {"cost", pd.cost}, {"emissions", pd.emissions}});
    }
    j["periods"] = periods;
    return j;
}

nlohmann::ordered_json nash_result_json(const NashResult& r) {
    nlohmann::ordered_json j;
    j["command"] = "nash";
    j["lambda_star"] = r.lambda_star;
    j["F_star"] = r.F_star;
    j["converged"] = r.converged;
    j["degenerate"] = r.degenerate;
    j["iterations"] = r.iterations;
    j["converged_by"] = r.converged_by;
    j["d1"] = r.problem.d1;
    j["d2"] = r.problem.d2;
    j["cost_norm"] = r.problem.cost_norm;
    j["emission_norm"] = r.problem.emission_norm;
    j["carbon_price"] = {{"ratio", r.carbon_ratio}, {"per_ton", r.carbon_price}};
    if (r.refined) {
        j["refined_point"] = {{"cost", r.refined->cost},
                              {"emissions", r.refined->emissions},
                              {"s", r.refined->s},
                              {"F", r.refined->F}};
    } else {
        j["refined_point"] = nullptr;
    }
    j["dispatch_totals"] = {{"cost", r.dispatch.total_cost},
                            {"emissions", r.dispatch.total_emissions}};
    return j;
}

}  // namespace lced
