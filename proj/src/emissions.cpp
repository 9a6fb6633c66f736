#include "greenrisk/emissions.hpp"

#include "greenrisk/common.hpp"
#include "greenrisk/text.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

namespace greenrisk {

namespace {

constexpr std::array<EmissionField, 4> kEmissionFields{
    EmissionField::scope1, EmissionField::scope2_market, EmissionField::scope2_location,
    EmissionField::scope2_uncategorized};

std::optional<double>& field_ref(RelativeEmissions& r, EmissionField f) {
    switch (f) {
    case EmissionField::scope1: return r.scope1;
    case EmissionField::scope2_market: return r.scope2_market;
    case EmissionField::scope2_location: return r.scope2_location;
    case EmissionField::scope2_uncategorized: return r.scope2_uncategorized;
    }
    return r.scope1;
}

const std::optional<double>& field_ref(const RelativeEmissions& r, EmissionField f) {
    return field_ref(const_cast<RelativeEmissions&>(r), f);
}

const std::optional<double>& field_ref(const EmissionsRecord& r, EmissionField f) {
    switch (f) {
    case EmissionField::scope1: return r.scope1;
    case EmissionField::scope2_market: return r.scope2_market;
    case EmissionField::scope2_location: return r.scope2_location;
    case EmissionField::scope2_uncategorized: return r.scope2_uncategorized;
    }
    return r.scope1;
}

using GroupKey = std::pair<Sector, int>;

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cell);
            cell.clear();
        } else if (c != '\r') {
            cell.push_back(c);
        }
    }
    cells.push_back(cell);
    return cells;
}

std::optional<double> parse_optional_double(const std::string& cell, std::size_t line_no) {
    const std::string t = trim(cell);
    if (t.empty() || t == "-") {
        return std::nullopt;
    }
    std::size_t consumed = 0;
    double value = 0.0;
    try {
        value = std::stod(t, &consumed);
    } catch (const std::exception&) {
        throw Error("emissions CSV line " + std::to_string(line_no) + ": bad number '" + t +
                    "'");
    }
    if (consumed != t.size()) {
        throw Error("emissions CSV line " + std::to_string(line_no) + ": bad number '" + t +
                    "'");
    }
    return value;
}

std::string format_cell(const std::optional<double>& value) {
    if (!value.has_value()) {
        return "";
    }
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%g", *value);
    return buffer;
}

} // namespace

std::string_view emission_field_name(EmissionField field) {
    switch (field) {
    case EmissionField::scope1: return "scope1";
    case EmissionField::scope2_market: return "scope2_market";
    case EmissionField::scope2_location: return "scope2_location";
    case EmissionField::scope2_uncategorized: return "scope2_uncategorized";
    }
    return "scope1";
}

std::vector<RelativeEmissions> relative_emissions(const std::vector<EmissionsRecord>& records) {
    if (records.empty()) {
        throw Error("relative_emissions requires at least one record");
    }
    // Per (sector, year, field) means over the records where the field is present.
    std::map<GroupKey, std::array<std::pair<double, std::size_t>, 4>> sums;
    for (const auto& record : records) {
        auto& group = sums[{record.sector, record.year}];
        for (std::size_t f = 0; f < kEmissionFields.size(); ++f) {
            const auto& value = field_ref(record, kEmissionFields[f]);
            if (value.has_value()) {
                group[f].first += *value;
                group[f].second += 1;
            }
        }
    }

    std::vector<RelativeEmissions> relatives;
    relatives.reserve(records.size());
    for (const auto& record : records) {
        RelativeEmissions rel;
        rel.company = record.company;
        rel.sector = record.sector;
        rel.year = record.year;
        rel.revenue = record.revenue;
        const auto& group = sums[{record.sector, record.year}];
        for (std::size_t f = 0; f < kEmissionFields.size(); ++f) {
            const auto& value = field_ref(record, kEmissionFields[f]);
            if (value.has_value()) {
                const double mean = group[f].first / static_cast<double>(group[f].second);
                field_ref(rel, kEmissionFields[f]) = *value - mean;
            }
        }
        relatives.push_back(std::move(rel));
    }
    return relatives;
}

std::vector<OutlierFlag> flag_outliers(const std::vector<RelativeEmissions>& relatives,
                                       double k) {
    if (!(k > 0.0)) {
        throw Error("outlier multiplier k must be > 0");
    }
    std::map<GroupKey, std::vector<const RelativeEmissions*>> groups;
    for (const auto& rel : relatives) {
        groups[{rel.sector, rel.year}].push_back(&rel);
    }

    std::vector<OutlierFlag> flags;
    for (const auto& [key, members] : groups) {
        for (EmissionField field : kEmissionFields) {
            std::vector<const RelativeEmissions*> present;
            for (const auto* rel : members) {
                if (field_ref(*rel, field).has_value()) {
                    present.push_back(rel);
                }
            }
            if (present.size() < 2) {
                continue;
            }
            double mean = 0.0;
            for (const auto* rel : present) {
                mean += *field_ref(*rel, field);
            }
            mean /= static_cast<double>(present.size());
            double sum_sq = 0.0;
            for (const auto* rel : present) {
                const double d = *field_ref(*rel, field) - mean;
                sum_sq += d * d;
            }
            const double std_dev = std::sqrt(sum_sq / static_cast<double>(present.size()));
            if (std_dev == 0.0) {
                continue;
            }
            const double threshold = k * std_dev;
            for (const auto* rel : present) {
                const double deviation = *field_ref(*rel, field);
                if (deviation > threshold) {
                    flags.push_back({rel->company, field, deviation, threshold});
                }
            }
        }
    }
    return flags;
}

EmissionsInput load_emissions_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open emissions CSV: " + path);
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw Error("emissions CSV is empty: " + path);
    }
    const std::vector<std::string> header = split_csv_line(line);
    const std::vector<std::string> expected{
        "company", "sector", "year", "mode", "scope1", "scope2_market",
        "scope2_location", "scope2_uncategorized", "revenue"};
    if (header.size() != expected.size()) {
        throw Error("emissions CSV header must have " + std::to_string(expected.size()) +
                    " columns: " + path);
    }
    for (std::size_t i = 0; i < expected.size(); ++i) {
        if (trim(header[i]) != expected[i]) {
            throw Error("emissions CSV header column " + std::to_string(i + 1) +
                        " must be '" + expected[i] + "'");
        }
    }

    EmissionsInput input;
    bool mode_set = false;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        const std::vector<std::string> cells = split_csv_line(line);
        if (cells.size() != expected.size()) {
            throw Error("emissions CSV line " + std::to_string(line_no) + ": expected " +
                        std::to_string(expected.size()) + " cells");
        }
        EmissionsRecord record;
        record.company = trim(cells[0]);
        record.sector = sector_from_name(trim(cells[1]));
        try {
            record.year = std::stoi(trim(cells[2]));
        } catch (const std::exception&) {
            throw Error("emissions CSV line " + std::to_string(line_no) + ": bad year");
        }
        const std::string mode_cell = trim(cells[3]);
        EmissionsMode row_mode;
        if (mode_cell == "raw") {
            row_mode = EmissionsMode::raw;
        } else if (mode_cell == "relative") {
            row_mode = EmissionsMode::relative;
        } else {
            throw Error("emissions CSV line " + std::to_string(line_no) +
                        ": mode must be 'raw' or 'relative'");
        }
        if (!mode_set) {
            input.mode = row_mode;
            mode_set = true;
        } else if (row_mode != input.mode) {
            throw Error("emissions CSV line " + std::to_string(line_no) +
                        ": mixed raw/relative modes");
        }
        record.scope1 = parse_optional_double(cells[4], line_no);
        record.scope2_market = parse_optional_double(cells[5], line_no);
        record.scope2_location = parse_optional_double(cells[6], line_no);
        record.scope2_uncategorized = parse_optional_double(cells[7], line_no);
        const auto revenue = parse_optional_double(cells[8], line_no);
        if (!revenue.has_value() || !(*revenue > 0.0)) {
            throw Error("emissions CSV line " + std::to_string(line_no) +
                        ": revenue must be > 0");
        }
        record.revenue = *revenue;
        if (input.mode == EmissionsMode::raw) {
            for (EmissionField field : kEmissionFields) {
                const auto& value = field_ref(record, field);
                if (value.has_value() && *value < 0.0) {
                    throw Error("emissions CSV line " + std::to_string(line_no) +
                                ": raw emissions must be >= 0");
                }
            }
        }
        input.records.push_back(std::move(record));
    }
    if (input.records.empty()) {
        throw Error("emissions CSV has no data rows: " + path);
    }
    return input;
}

std::vector<RelativeEmissions> to_relatives(const EmissionsInput& input) {
    if (input.mode == EmissionsMode::raw) {
        return relative_emissions(input.records);
    }
    std::vector<RelativeEmissions> relatives;
    relatives.reserve(input.records.size());
    for (const auto& record : input.records) {
        RelativeEmissions rel;
        rel.company = record.company;
        rel.sector = record.sector;
        rel.year = record.year;
        rel.scope1 = record.scope1;
        rel.scope2_market = record.scope2_market;
        rel.scope2_location = record.scope2_location;
        rel.scope2_uncategorized = record.scope2_uncategorized;
        rel.revenue = record.revenue;
        relatives.push_back(std::move(rel));
    }
    return relatives;
}

EmissionsReport emissions_report(const std::vector<RelativeEmissions>& relatives,
                                 const std::vector<OutlierFlag>& flags,
                                 const std::vector<CompanyEval>* evals) {
    EmissionsReport report;
    for (const auto& rel : relatives) {
        EmissionsReportRow row;
        row.company = rel.company;
        row.sector = rel.sector;
        row.scope1 = rel.scope1;
        row.scope2_market = rel.scope2_market;
        row.scope2_location = rel.scope2_location;
        row.scope2_uncategorized = rel.scope2_uncategorized;
        row.revenue = rel.revenue;
        for (const auto& flag : flags) {
            if (flag.company == rel.company) {
                row.flagged.push_back(flag.field);
            }
        }
        report.rows.push_back(std::move(row));
    }
    if (evals != nullptr) {
        for (const auto& eval : *evals) {
            auto it = std::find_if(report.rows.begin(), report.rows.end(),
                                   [&](const auto& r) { return r.company == eval.company; });
            if (it == report.rows.end()) {
                EmissionsReportRow row;
                row.company = eval.company;
                report.rows.push_back(std::move(row));
                it = std::prev(report.rows.end());
            }
            it->report_label_predicted = eval.report_label_predicted;
            it->report_label_gold = eval.report_label_gold;
        }
    }
    std::sort(report.rows.begin(), report.rows.end(), [](const auto& a, const auto& b) {
        const int sa = a.sector.has_value() ? static_cast<int>(*a.sector) : 99;
        const int sb = b.sector.has_value() ? static_cast<int>(*b.sector) : 99;
        return std::tie(sa, a.company) < std::tie(sb, b.company);
    });
    return report;
}

std::string emissions_report_csv(const EmissionsReport& report) {
    std::ostringstream out;
    out << "company,sector,scope1,scope2_market,scope2_location,scope2_uncategorized,"
           "revenue,flagged,report_label_pred,report_label_gold\n";
    for (const auto& row : report.rows) {
        out << row.company << ',' << (row.sector ? sector_name(*row.sector) : "") << ','
            << format_cell(row.scope1) << ',' << format_cell(row.scope2_market) << ','
            << format_cell(row.scope2_location) << ','
            << format_cell(row.scope2_uncategorized) << ',' << format_cell(row.revenue)
            << ',';
        for (std::size_t i = 0; i < row.flagged.size(); ++i) {
            if (i > 0) {
                out << ';';
            }
            out << emission_field_name(row.flagged[i]);
        }
        out << ',';
        if (row.report_label_predicted) {
            out << *row.report_label_predicted;
        }
        out << ',';
        if (row.report_label_gold) {
            out << *row.report_label_gold;
        }
        out << '\n';
    }
    return out.str();
}

std::string emissions_report_text(const EmissionsReport& report) {
    std::ostringstream out;
    for (const auto& row : report.rows) {
        out << (row.sector ? sector_name(*row.sector) : std::string_view("?")) << "  "
            << row.company << ": scope1=" << (row.scope1 ? format_cell(row.scope1) : "-")
            << " s2_market=" << (row.scope2_market ? format_cell(row.scope2_market) : "-")
            << " s2_location="
            << (row.scope2_location ? format_cell(row.scope2_location) : "-")
            << " s2_uncat="
            << (row.scope2_uncategorized ? format_cell(row.scope2_uncategorized) : "-")
            << " revenue=" << (row.revenue ? format_cell(row.revenue) : "-");
        if (!row.flagged.empty()) {
            out << "  FLAGGED:";
            for (EmissionField field : row.flagged) {
                out << ' ' << emission_field_name(field);
            }
        }
        if (row.report_label_predicted) {
            out << "  pred=" << *row.report_label_predicted;
        }
        if (row.report_label_gold) {
            out << " gold=" << *row.report_label_gold;
        }
        out << '\n';
    }
    return out.str();
}

} // namespace greenrisk
