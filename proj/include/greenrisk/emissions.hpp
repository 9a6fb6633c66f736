#pragma once

#include "greenrisk/corpus.hpp"
#include "greenrisk/evaluation.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace greenrisk {

// Scope 1/2 emissions in hundred-thousand metric tonnes CO2e, revenue in
// billions of USD. Absent scope-2 categories stay unset.
struct EmissionsRecord {
    std::string company;
    Sector sector = Sector::other;
    int year = 0;
    std::optional<double> scope1;
    std::optional<double> scope2_market;
    std::optional<double> scope2_location;
    std::optional<double> scope2_uncategorized;
    double revenue = 0.0;
};

// Per-field deviations from the (sector, year) group mean, same units.
struct RelativeEmissions {
    std::string company;
    Sector sector = Sector::other;
    int year = 0;
    std::optional<double> scope1;
    std::optional<double> scope2_market;
    std::optional<double> scope2_location;
    std::optional<double> scope2_uncategorized;
    double revenue = 0.0;
};

enum class EmissionField { scope1, scope2_market, scope2_location, scope2_uncategorized };

std::string_view emission_field_name(EmissionField field);

// deviation = value - mean over the (sector, year) group, each field averaged
// only over records where it is present.
std::vector<RelativeEmissions> relative_emissions(const std::vector<EmissionsRecord>& records);

struct OutlierFlag {
    std::string company;
    EmissionField field = EmissionField::scope1;
    double deviation = 0.0;
    double threshold = 0.0; // k * population std of the group's deviations
};

// Flags a company-field when its deviation exceeds k times the population
// standard deviation of that field's deviations within the (sector, year)
// group. Signed comparison: only the high side is flagged. Groups of size 1
// produce no flags.
std::vector<OutlierFlag> flag_outliers(const std::vector<RelativeEmissions>& relatives,
                                       double k = 1.5);

enum class EmissionsMode { raw, relative };

struct EmissionsInput {
    EmissionsMode mode = EmissionsMode::raw;
    std::vector<EmissionsRecord> records;
};

// CSV: company, sector, year, mode{raw|relative}, scope1, scope2_market,
// scope2_location, scope2_uncategorized, revenue. Blank cells mean "not
// reported". The mode must be uniform across rows.
EmissionsInput load_emissions_csv(const std::string& path);

// Raw input is converted through relative_emissions; relative input passes
// through unchanged.
std::vector<RelativeEmissions> to_relatives(const EmissionsInput& input);

struct EmissionsReportRow {
    std::string company;
    std::optional<Sector> sector;
    std::optional<double> scope1;
    std::optional<double> scope2_market;
    std::optional<double> scope2_location;
    std::optional<double> scope2_uncategorized;
    std::optional<double> revenue;
    std::vector<EmissionField> flagged;
    std::optional<int> report_label_predicted;
    std::optional<int> report_label_gold;
};

struct EmissionsReport {
    std::vector<EmissionsReportRow> rows; // sorted by sector then company
};

// Joins relative emissions with outlier flags and, when provided, report-level
// greenwashing labels. Companies present only in evals get blank emissions cells.
EmissionsReport emissions_report(const std::vector<RelativeEmissions>& relatives,
                                 const std::vector<OutlierFlag>& flags,
                                 const std::vector<CompanyEval>* evals = nullptr);

std::string emissions_report_csv(const EmissionsReport& report);
std::string emissions_report_text(const EmissionsReport& report);

} // namespace greenrisk
