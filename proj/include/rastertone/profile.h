#pragma once

#include <optional>
#include <string>
#include <vector>

namespace rastertone {

// Measured SNR operating points keyed by (brand, distance, bit rate).
class ChannelProfile {
  public:
    struct Row {
        std::string brand;
        double distance_m = 0.0;
        int bit_rate_bps = 0;
        std::optional<double> snr_db;  // empty where no measurement exists
    };

    static ChannelProfile from_csv(const std::string& content);
    static ChannelProfile from_csv_file(const std::string& path);

    // Case-insensitive brand match; returns nothing for unmeasured points.
    std::optional<double> lookup(const std::string& brand, double distance_m,
                                 int bit_rate_bps) const;
    const std::vector<Row>& rows() const { return rows_; }

  private:
    std::vector<Row> rows_;
};

// Schema: brand,distance_m,bit_rate_bps,snr_db
ChannelProfile load_profile(const std::string& csv_content);

struct PositionRow {
    std::string screen;
    std::string model;
    std::string resolution;
    std::string position;  // back/front/left/right/desk
    double snr_db = 0.0;
};

// Schema: screen,model,resolution,position,snr_db
std::vector<PositionRow> load_position_table(const std::string& csv_content);
std::vector<PositionRow> load_position_table_file(const std::string& path);

}  // namespace rastertone
