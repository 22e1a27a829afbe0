#ifndef VOLTRISK_UVC_HPP_
#define VOLTRISK_UVC_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "voltrisk/grid.hpp"
#include "voltrisk/linalg.hpp"

namespace voltrisk {

// Hourly history of true and predicted injections. Rows are timestamps
// (epoch hours, strictly increasing); columns follow the layout's
// uncertain_gens / uncertain_loads order.
struct InjectionSeries {
    std::vector<std::int64_t> t;  // epoch hours
    std::vector<std::string> gen_ids;
    std::vector<std::string> load_ids;
    Matrix gen_true;
    Matrix gen_pred;
    Matrix load_true;
    Matrix load_pred;

    std::size_t size() const { return t.size(); }
    int hour_of_day(std::size_t row) const {
        return static_cast<int>(((t[row] % 24) + 24) % 24);
    }

    void validate() const;
};

// Paired samples of true and predicted UVC at one (bus, hour), pu^2.
struct UvcSampleSet {
    BusId bus = 0;
    int hour = 0;
    std::vector<double> v_true;
    std::vector<double> v_pred;

    std::size_t size() const { return v_true.size(); }
};

struct VoltageDecomposition {
    double v_r = 0.0;  // uncertain component, pu^2
    double v_c = 0.0;  // controllable component, pu^2
    double v_o = 0.0;  // constant component, pu^2

    double total() const { return v_r + v_c + v_o; }
};

// V_n = sum_g b_gen * chi_n - sum_d b_load * zeta_n over history records at
// the given hour-of-day, plus the predicted counterpart.
UvcSampleSet compute_uvc_samples(const UvcCoefficients& coeffs, const InjectionSeries& hist,
                                 BusId bus, int hour, double alpha = 0.0);

// Day-ahead UVC prediction with curtailment ratio alpha applied to the
// generation term: (1-alpha) * sum_g b_gen * chi_pred - sum_d b_load * zeta_pred.
double predict_uvc(const UvcCoefficients& coeffs, const std::vector<double>& chi_pred,
                   const std::vector<double>& zeta_pred, BusId bus, double alpha = 0.0);

VoltageDecomposition decompose_voltage(const UvcCoefficients& coeffs,
                                       const InjectionLayout& layout,
                                       const std::vector<double>& chi,
                                       const std::vector<double>& zeta,
                                       const std::vector<double>& q, double v0, BusId bus,
                                       double alpha = 0.0);

// Seasonal persistence: the prediction for hour t is the observed value at
// t - 24h. Returns `horizon` predictions for the hours following the series.
std::vector<double> baseline_point_predictor(const std::vector<double>& series, int horizon);

// Long-format CSV `timestamp,id,true,predicted`. Timestamps are epoch hours
// or ISO dates (YYYY-MM-DDTHH:00 / "YYYY-MM-DD HH:00"). When the predicted
// column is absent the persistence predictor fills it and the first 24 hours
// are dropped. Returns true in *used_baseline when that fallback ran.
InjectionSeries load_series_csv(const std::string& path, const InjectionLayout& layout,
                                bool* used_baseline = nullptr);

}  // namespace voltrisk

#endif  // VOLTRISK_UVC_HPP_
