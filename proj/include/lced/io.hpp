#ifndef LCED_IO_HPP
#define LCED_IO_HPP

#include <filesystem>
#include <iosfwd>

#include <json.hpp>

#include "lced/dispatch.hpp"
#include "lced/nash.hpp"

namespace lced {

/// Serialize with every float printed at 12 significant digits, so repeated
/// runs emit byte-identical files.
void write_json(const nlohmann::ordered_json& j, std::ostream& out, int indent = 2);
void write_json_file(const nlohmann::ordered_json& j, const std::filesystem::path& path);

/// Long-format per-period dispatch: t,element,id,value. Units, dc and ac
/// flows in MW, node angles in radians.
void write_dispatch_csv(const HorizonDispatch& hd, const CaseData& c,
                        const std::filesystem::path& path);

/// Per-period critical regions: lambda_lo,lambda_hi,value_alpha,value_beta.
void write_regions_csv(const std::vector<CriticalRegion>& regions,
                       const std::filesystem::path& path);

nlohmann::ordered_json solve_result_json(const HorizonDispatch& hd, double lambda,
                                         const Norms& norms);
nlohmann::ordered_json nash_result_json(const NashResult& result);

}  // namespace lced

#endif
