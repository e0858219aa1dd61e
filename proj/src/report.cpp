#include "pesc/report.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace pesc {

namespace {

// Row key: guidance-off rows first, then by treatment code.
std::string row_key(const TreatmentSet& t) {
    return (t.guidance ? "1" : "0") + treatment_code(t);
}

std::string row_label(const TreatmentSet& t) {
    std::string code = treatment_code(t);
    if (code.empty()) code = "base";
    if (t.guidance) code += "+G";
    return code;
}

double percentile(const std::vector<int>& sorted, double q) {
    if (sorted.empty()) return 0;
    if (sorted.size() == 1) return sorted[0];
    double idx = q * (sorted.size() - 1);
    std::size_t lo = static_cast<std::size_t>(idx);
    std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    double frac = idx - lo;
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(1);
    os << std::fixed << v;
    return os.str();
}

} // namespace

bool natural_id_less(const std::string& a, const std::string& b) {
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (std::isdigit(static_cast<unsigned char>(a[i])) &&
            std::isdigit(static_cast<unsigned char>(b[j]))) {
            std::size_t i2 = i, j2 = j;
            while (i2 < a.size() && std::isdigit(static_cast<unsigned char>(a[i2]))) ++i2;
            while (j2 < b.size() && std::isdigit(static_cast<unsigned char>(b[j2]))) ++j2;
            long long na = std::stoll(a.substr(i, i2 - i));
            long long nb = std::stoll(b.substr(j, j2 - j));
            if (na != nb) return na < nb;
            i = i2;
            j = j2;
            continue;
        }
        if (a[i] != b[j]) return a[i] < b[j];
        ++i;
        ++j;
    }
    return a.size() < b.size();
}

std::string CellSummary::mark() const {
    if (successes > 0) {
        std::string m = std::to_string(successes) + "/" + std::to_string(repetitions);
        if (min_iterations) m += ":" + std::to_string(*min_iterations);
        return m;
    }
    if (almost_there) return "AT";
    return "-";
}

int percent_solved(int solved, int total) {
    if (total <= 0) return 0;
    return static_cast<int>(std::lround(100.0 * solved / total));
}

ResultTable summarize(const std::vector<RunTrace>& traces) {
    ResultTable table;

    std::set<std::string> scenario_set;
    for (const auto& t : traces) scenario_set.insert(t.config.scenario_id);
    table.scenario_ids.assign(scenario_set.begin(), scenario_set.end());
    std::sort(table.scenario_ids.begin(), table.scenario_ids.end(), natural_id_less);

    std::map<std::string, ResultRow> rows;
    for (const auto& t : traces) {
        ResultRow& row = rows[row_key(t.config.treatments)];
        row.config = t.config.treatments;
        CellSummary& cell = row.cells[t.config.scenario_id];
        ++cell.repetitions;
        if (t.outcome.success) {
            ++cell.successes;
            if (!cell.min_iterations || t.outcome.iterations_used < *cell.min_iterations) {
                cell.min_iterations = t.outcome.iterations_used;
            }
        } else if (t.almost_there) {
            cell.almost_there = true;
        }
    }

    for (auto& [key, row] : rows) {
        row.solved = 0;
        for (const auto& [sid, cell] : row.cells) {
            if (cell.successes > 0) ++row.solved;
        }
        row.percent = percent_solved(row.solved, static_cast<int>(table.scenario_ids.size()));
        table.rows.push_back(row);
    }
    return table;
}

std::string ResultTable::to_text() const {
    // Column widths from content.
    std::vector<std::size_t> widths;
    widths.push_back(10);  // config label
    for (const auto& sid : scenario_ids) widths.push_back(std::max<std::size_t>(sid.size(), 6));
    for (const auto& row : rows) {
        widths[0] = std::max(widths[0], row_label(row.config).size());
        for (std::size_t c = 0; c < scenario_ids.size(); ++c) {
            auto it = row.cells.find(scenario_ids[c]);
            if (it != row.cells.end()) {
                widths[c + 1] = std::max(widths[c + 1], it->second.mark().size());
            }
        }
    }

    std::ostringstream os;
    auto pad = [&](const std::string& s, std::size_t w) {
        os << s;
        for (std::size_t k = s.size(); k < w + 2; ++k) os << ' ';
    };
    pad("config", widths[0]);
    pad("%", 4);
    for (std::size_t c = 0; c < scenario_ids.size(); ++c) pad(scenario_ids[c], widths[c + 1]);
    os << '\n';

    for (const auto& row : rows) {
        pad(row_label(row.config), widths[0]);
        pad(std::to_string(row.percent) + "%", 4);
        for (std::size_t c = 0; c < scenario_ids.size(); ++c) {
            auto it = row.cells.find(scenario_ids[c]);
            pad(it == row.cells.end() ? "-" : it->second.mark(), widths[c + 1]);
        }
        os << '\n';
    }
    return os.str();
}

std::string ResultTable::to_csv() const {
    std::ostringstream os;
    os << "config,percent";
    for (const auto& sid : scenario_ids) os << ',' << sid;
    os << '\n';
    for (const auto& row : rows) {
        os << row_label(row.config) << ',' << row.percent;
        for (const auto& sid : scenario_ids) {
            auto it = row.cells.find(sid);
            os << ',' << (it == row.cells.end() ? "-" : it->second.mark());
        }
        os << '\n';
    }
    return os.str();
}

TokenReport token_report(const std::vector<RunTrace>& traces) {
    TokenReport report;
    std::map<std::string, std::vector<int>> samples;
    for (const auto& t : traces) {
        for (const auto& r : t.records) {
            for (const auto& [component, tokens] : r.token_counts) {
                samples[component].push_back(tokens);
            }
        }
    }
    for (auto& [component, values] : samples) {
        std::sort(values.begin(), values.end());
        ComponentStats s;
        s.count = static_cast<long>(values.size());
        for (int v : values) s.total += v;
        s.mean = static_cast<double>(s.total) / s.count;
        s.median = percentile(values, 0.5);
        s.p25 = percentile(values, 0.25);
        s.p75 = percentile(values, 0.75);
        s.p90 = percentile(values, 0.90);
        s.min = values.front();
        s.max = values.back();
        report.components[component] = s;

        if (component.find("_prompt") != std::string::npos) {
            report.total_input_tokens += s.total;
        } else {
            report.total_output_tokens += s.total;
        }
    }
    return report;
}

std::string TokenReport::to_text() const {
    std::ostringstream os;
    os << "component               count\tmean\tmedian\tp25\tp75\tp90\tmin\tmax\n";
    for (const auto& [name, s] : components) {
        os << name;
        for (std::size_t k = name.size(); k < 24; ++k) os << ' ';
        os << s.count << "\t" << fmt(s.mean) << "\t" << fmt(s.median) << "\t" << fmt(s.p25)
           << "\t" << fmt(s.p75) << "\t" << fmt(s.p90) << "\t" << s.min << "\t" << s.max << '\n';
    }
    os << "total_input_tokens " << total_input_tokens << '\n';
    os << "total_output_tokens " << total_output_tokens << '\n';
    return os.str();
}

std::string TokenReport::to_csv() const {
    std::ostringstream os;
    os << "component,count,mean,median,p25,p75,p90,min,max,total\n";
    for (const auto& [name, s] : components) {
        os << name << ',' << s.count << ',' << fmt(s.mean) << ',' << fmt(s.median) << ','
           << fmt(s.p25) << ',' << fmt(s.p75) << ',' << fmt(s.p90) << ',' << s.min << ',' << s.max
           << ',' << s.total << '\n';
    }
    return os.str();
}

} // namespace pesc
