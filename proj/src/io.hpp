#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "analysis.hpp"
#include "error.hpp"

namespace fpuwave {

class IoError : public Error {
public:
    using Error::Error;
};

/// Shortest decimal string that reads back to the same double; "nan", "inf", "-inf".
std::string format_number(double v);

struct CsvColumn {
    std::string name;
    std::span<const double> values;
};

/// Writes equal-length columns with a header row. Creates parent directories.
void write_csv(const std::filesystem::path& path, const std::vector<CsvColumn>& columns);

void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

/// "x,value"
void write_profile_csv(const std::filesystem::path& path, const Profile& p);
/// "y,value,d1,d2"; d2 is nan for the transition scaling.
void write_scaled_csv(const std::filesystem::path& path, const ScaledProfile& p);

/// Column order of sweep.csv.
std::vector<std::string> sweep_csv_columns();
void write_sweep_csv(const std::filesystem::path& path, const SweepReport& report);

nlohmann::json to_json(const WaveSolution& sol);
nlohmann::json to_json(const SweepRow& row);
nlohmann::json to_json(const SweepReport& report);

/// File name fragment for a delta, e.g. 0.27 -> "0.27".
std::string delta_tag(double delta);

} // namespace fpuwave
