#pragma once

#include <optional>
#include <string>
#include <vector>

#include "evacsim/delay_distribution.hpp"
#include "evacsim/model.hpp"

namespace evacsim {

// The four built-in centralization architectures plus shared evaluation
// options.
struct ScenarioSuite {
    std::vector<ScenarioParams> scenarios;
    // Table-level requirement (the 300 ms regulatory deadline); each
    // scenario keeps its own, stricter protection target for sim/compose.
    ProtectionRequirement shared_protection;
};

// One row of the centralization summary table.
struct Table1Row {
    std::string name;
    int processors = 0;
    double tv_receivers = 0.0;
    double network_latency_ms = 0.0;
    double sm_response_ms = 0.0;
    double evacuation_lo_ms = 0.0;   // lo == hi for scalar rows
    double evacuation_hi_ms = 0.0;
    bool stable = true;              // queueing mode only; false = overloaded
    std::optional<double> protection_probability;  // queueing mode

    double evacuation_mean_ms() const {
        return 0.5 * (evacuation_lo_ms + evacuation_hi_ms);
    }
};

struct RealtimeVerdict {
    std::string name;
    bool pass = false;
    std::string basis;  // "mean" or "protection"
};

// One point of a centralization sweep: a manager handling m receivers.
struct SweepPoint {
    double tv_receivers = 0.0;
    double db_query_ms = 0.0;
    double sm_response_ms = 0.0;
    double evacuation_mean_ms = 0.0;
    double protection_probability = 0.0;
    bool stable = true;
};

/// The four architectures with their quoted parameters: fully distributed,
/// regional, national and semi-national centralization.
ScenarioSuite builtin_scenarios();

/// Evaluate the built-in suite. simple mode is a pure function of the
/// parameters (no RNG); queueing mode adds queue-wait effects and flags
/// overloaded rows instead of failing.
std::vector<Table1Row> reproduce_table1(EvalMode mode);
std::vector<Table1Row> reproduce_table1(const ScenarioSuite& suite, EvalMode mode);

/// Pass/fail per row: mean <= delta_max when no distribution is attached,
/// otherwise protection_probability >= o_max.
std::vector<RealtimeVerdict> check_realtime(const std::vector<Table1Row>& rows,
                                            const ProtectionRequirement& req);

/// Per-query database response time as a function of database size:
/// flat at 6 ms up to 1e6 records, log-log linear through the
/// (1e6, 6 ms) and (45e6, 100 ms) anchors beyond.
double db_query_time_ms(double records);

/// Evaluate `base` for each manager size (registered receivers); arrival
/// rate, query time and the derived service coefficient follow the size.
std::vector<SweepPoint> sweep_centralization(const ScenarioParams& base,
                                             const std::vector<double>& manager_sizes,
                                             EvalMode mode);

// --- Report emission --------------------------------------------------------

enum class ReportFormat { csv, json_text };

// Pre-formatted result table; all numeric cells carry fixed three-decimal
// text so emission is byte-stable.
struct ReportTable {
    struct Cell {
        std::string text;
        bool is_number = false;
    };
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

ReportTable to_report(const std::vector<Table1Row>& rows,
                      const std::vector<RealtimeVerdict>& verdicts);
ReportTable to_report(const std::vector<SweepPoint>& points);

std::string render_report(const ReportTable& table, ReportFormat format);

/// Write the rendered report; rejects empty result sets and unwritable paths.
void emit_report(const ReportTable& table, ReportFormat format,
                 const std::string& path);

}  // namespace evacsim
