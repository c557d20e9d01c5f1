#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "hexlat/perturbation.hpp"
#include "hexlat/shells.hpp"
#include "hexlat/variational.hpp"

namespace hexlat {

// 17 significant digits round-trip any double exactly.
inline std::string fmt_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline const char* energy_kind_name(EnergyKind k) {
    switch (k) {
        case EnergyKind::squared: return "squared";
        case EnergyKind::linear: return "linear";
        default: return "general_phi";
    }
}

using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

inline void write_config_header(std::ostream& os, const ConfigEcho& kv) {
    for (const auto& [key, value] : kv) os << "# " << key << " = " << value << "\n";
}

inline void write_shell_table_csv(std::ostream& os, const std::vector<ShellIndexSet>& shells,
                                  const ConfigEcho& header = {}) {
    write_config_header(os, header);
    os << "radius,k,l,triple_id\n";
    long long triple_id = 0;
    for (const ShellIndexSet& s : shells) {
        for (const Triple& t : s.triples) {
            for (const IndexPair& m : {t.a, t.b, t.c})
                os << fmt_real(s.radius) << ',' << m.k << ',' << m.l << ',' << triple_id << "\n";
            ++triple_id;
        }
    }
}

inline nlohmann::json shell_table_json(const std::vector<ShellIndexSet>& shells) {
    nlohmann::json arr = nlohmann::json::array();
    long long triple_id = 0;
    for (const ShellIndexSet& s : shells) {
        for (const Triple& t : s.triples) {
            for (const IndexPair& m : {t.a, t.b, t.c})
                arr.push_back({{"radius", s.radius}, {"k", m.k}, {"l", m.l}, {"triple_id", triple_id}});
            ++triple_id;
        }
    }
    return arr;
}

inline void write_hessian_records_csv(std::ostream& os,
                                      const std::vector<std::pair<std::string, HessianRecord>>& recs,
                                      const ConfigEcho& header = {}) {
    write_config_header(os, header);
    os << "case,k,l,h1,h2,h3,lambda_min,lambda_max\n";
    for (const auto& [label, r] : recs) {
        os << label << ',' << r.k << ',' << r.l << ',' << fmt_real(r.h1) << ',' << fmt_real(r.h2)
           << ',' << fmt_real(r.h3) << ',' << fmt_real(r.lambda_min) << ','
           << fmt_real(r.lambda_max) << "\n";
    }
}

inline nlohmann::json hessian_record_json(const std::string& label, const HessianRecord& r) {
    return {{"case", label},         {"k", r.k},
            {"l", r.l},              {"h1", r.h1},
            {"h2", r.h2},            {"h3", r.h3},
            {"lambda_min", r.lambda_min}, {"lambda_max", r.lambda_max}};
}

inline void write_coercivity_csv(std::ostream& os, const std::vector<CoercivityRecord>& recs,
                                 const ConfigEcho& header = {}) {
    write_config_header(os, header);
    os << "case,radius,shell_size,direction_index,ux,uy,kappa_chart,kappa_lattice,"
          "kappa_normalized,slope,min_gap,max_gap,floor_warning\n";
    for (const CoercivityRecord& r : recs) {
        os << energy_kind_name(r.kind) << ',' << fmt_real(r.radius) << ',' << r.shell_size << ','
           << r.direction_index << ',' << fmt_real(r.ux) << ',' << fmt_real(r.uy) << ','
           << fmt_real(r.kappa_chart) << ',' << fmt_real(r.kappa_lattice) << ','
           << fmt_real(r.kappa_normalized) << ',' << fmt_real(r.slope) << ','
           << fmt_real(r.min_gap) << ',' << fmt_real(r.max_gap) << ','
           << (r.floor_warning ? 1 : 0) << "\n";
    }
}

inline nlohmann::json coercivity_record_json(const CoercivityRecord& r) {
    return {{"case", energy_kind_name(r.kind)},
            {"radius", r.radius},
            {"shell_size", r.shell_size},
            {"direction_index", r.direction_index},
            {"ux", r.ux},
            {"uy", r.uy},
            {"kappa_chart", r.kappa_chart},
            {"kappa_lattice", r.kappa_lattice},
            {"kappa_normalized", r.kappa_normalized},
            {"slope", r.slope},
            {"min_gap", r.min_gap},
            {"max_gap", r.max_gap},
            {"floor_warning", r.floor_warning}};
}

inline void write_gap_samples_csv(std::ostream& os,
                                  const std::vector<std::pair<std::pair<EnergyKind, int>, GapResult>>& rows,
                                  const std::vector<double>& d_per_row,
                                  const ConfigEcho& header = {}) {
    write_config_header(os, header);
    os << "case,radius,shell_size,direction_index,d,lattice_distance,gap\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& [key, g] = rows[i];
        os << energy_kind_name(key.first) << ',' << fmt_real(g.radius) << ',' << g.shell_size
           << ',' << key.second << ',' << fmt_real(d_per_row[i]) << ',' << fmt_real(g.distance)
           << ',' << fmt_real(g.gap) << "\n";
    }
}

inline void write_scan_csv(std::ostream& os, const LocalMaxScanReport& report,
                           const ConfigEcho& header = {}) {
    write_config_header(os, header);
    os << "direction_index,d,min_value,difference\n";
    for (const LocalMaxScanRow& row : report.rows) {
        os << row.direction_index << ',' << fmt_real(row.d) << ',' << fmt_real(row.min_value)
           << ',' << fmt_real(row.difference) << "\n";
    }
}

inline nlohmann::json scan_report_json(const LocalMaxScanReport& report) {
    nlohmann::json rows = nlohmann::json::array();
    for (const LocalMaxScanRow& row : report.rows)
        rows.push_back({{"direction_index", row.direction_index},
                        {"d", row.d},
                        {"min_value", row.min_value},
                        {"difference", row.difference}});
    nlohmann::json ratios = nlohmann::json::array();
    for (const DeficitRatio& r : report.ratios)
        ratios.push_back({{"direction_index", r.direction_index},
                          {"d_big", r.d_big},
                          {"d_small", r.d_small},
                          {"ratio", r.ratio}});
    return {{"admissibility_pass", report.certificate.pass},
            {"admissibility_detail", report.certificate.detail},
            {"precondition_ok", report.precondition_ok},
            {"precondition_distance", report.precondition_distance},
            {"hexagonal_minimum", report.hexagonal_minimum.value},
            {"refused", report.refused},
            {"refusal_reason", report.refusal_reason},
            {"all_negative", report.all_negative},
            {"ratios_quadratic", report.ratios_quadratic},
            {"rows", rows},
            {"ratios", ratios}};
}

}  // namespace hexlat
