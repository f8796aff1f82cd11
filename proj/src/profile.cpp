#include "rastertone/profile.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rastertone {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

std::string read_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

[[noreturn]] void parse_fail(int line_no, const std::string& what) {
    throw std::runtime_error("profile CSV parse error at line " +
                             std::to_string(line_no) + ": " + what);
}

}  // namespace

ChannelProfile ChannelProfile::from_csv(const std::string& content) {
    ChannelProfile profile;
    std::stringstream ss(content);
    std::string line;
    int line_no = 0;
    bool header_seen = false;
    while (std::getline(ss, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const std::vector<std::string> f = split_csv_line(t);
        if (!header_seen) {
            if (f.size() != 4 || lower(f[0]) != "brand" || lower(f[1]) != "distance_m" ||
                lower(f[2]) != "bit_rate_bps" || lower(f[3]) != "snr_db") {
                parse_fail(line_no,
                           "expected header brand,distance_m,bit_rate_bps,snr_db");
            }
            header_seen = true;
            continue;
        }
        if (f.size() != 4) parse_fail(line_no, "expected 4 fields, got " +
                                                   std::to_string(f.size()));
        Row row;
        row.brand = f[0];
        if (row.brand.empty()) parse_fail(line_no, "empty brand");
        try {
            row.distance_m = std::stod(f[1]);
            row.bit_rate_bps = std::stoi(f[2]);
        } catch (const std::exception&) {
            parse_fail(line_no, "bad numeric field");
        }
        if (f[3].empty() || f[3] == "-") {
            row.snr_db = std::nullopt;
        } else {
            try {
                row.snr_db = std::stod(f[3]);
            } catch (const std::exception&) {
                parse_fail(line_no, "bad snr_db field '" + f[3] + "'");
            }
        }
        profile.rows_.push_back(std::move(row));
    }
    if (!header_seen) throw std::runtime_error("profile CSV is empty");
    return profile;
}

ChannelProfile ChannelProfile::from_csv_file(const std::string& path) {
    return from_csv(read_file(path));
}

std::optional<double> ChannelProfile::lookup(const std::string& brand, double distance_m,
                                             int bit_rate_bps) const {
    const std::string b = lower(brand);
    for (const Row& row : rows_) {
        if (lower(row.brand) == b && std::abs(row.distance_m - distance_m) < 1e-9 &&
            row.bit_rate_bps == bit_rate_bps) {
            return row.snr_db;
        }
    }
    return std::nullopt;
}

ChannelProfile load_profile(const std::string& csv_content) {
    return ChannelProfile::from_csv(csv_content);
}

std::vector<PositionRow> load_position_table(const std::string& csv_content) {
    std::vector<PositionRow> rows;
    std::stringstream ss(csv_content);
    std::string line;
    int line_no = 0;
    bool header_seen = false;
    while (std::getline(ss, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const std::vector<std::string> f = split_csv_line(t);
        if (!header_seen) {
            if (f.size() != 5 || lower(f[0]) != "screen") {
                parse_fail(line_no,
                           "expected header screen,model,resolution,position,snr_db");
            }
            header_seen = true;
            continue;
        }
        if (f.size() != 5) parse_fail(line_no, "expected 5 fields");
        PositionRow row;
        row.screen = f[0];
        row.model = f[1];
        row.resolution = f[2];
        row.position = f[3];
        try {
            row.snr_db = std::stod(f[4]);
        } catch (const std::exception&) {
            parse_fail(line_no, "bad snr_db field");
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<PositionRow> load_position_table_file(const std::string& path) {
    return load_position_table(read_file(path));
}

}  // namespace rastertone
