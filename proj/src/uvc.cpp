#include "voltrisk/uvc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "voltrisk/csv.hpp"
#include "voltrisk/errors.hpp"

namespace voltrisk {

void InjectionSeries::validate() const {
    const std::size_t n = t.size();
    auto check = [&](const Matrix& m, const char* name) {
        if (m.rows() != n)
            throw InputError(std::string("InjectionSeries: ") + name +
                             " rows do not match timestamps");
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j)
                if (!std::isfinite(m(i, j)))
                    throw InputError(std::string("InjectionSeries: non-finite value in ") +
                                     name);
    };
    check(gen_true, "gen_true");
    check(gen_pred, "gen_pred");
    check(load_true, "load_true");
    check(load_pred, "load_pred");
    for (std::size_t i = 1; i < n; ++i)
        if (t[i] <= t[i - 1])
            throw InputError("InjectionSeries: timestamps must be strictly increasing");
    for (std::size_t i = 0; i < gen_true.rows(); ++i)
        for (std::size_t j = 0; j < gen_true.cols(); ++j)
            if (gen_true(i, j) < 0.0)
                throw InputError("InjectionSeries: negative generation sample");
}

UvcSampleSet compute_uvc_samples(const UvcCoefficients& coeffs, const InjectionSeries& hist,
                                 BusId bus, int hour, double alpha) {
    if (alpha < 0.0 || alpha > 1.0)
        throw InputError("compute_uvc_samples: alpha must lie in [0, 1]");
    const int i = coeffs.index_of(bus);
    if (i < 0)
        throw InputError("compute_uvc_samples: unknown bus " + std::to_string(bus));

    UvcSampleSet out;
    out.bus = bus;
    out.hour = hour;
    const std::size_t ng = coeffs.b_gen.cols();
    const std::size_t nd = coeffs.b_load.cols();
    for (std::size_t row = 0; row < hist.size(); ++row) {
        if (hist.hour_of_day(row) != hour) continue;
        double v = 0.0, vp = 0.0;
        for (std::size_t g = 0; g < ng; ++g) {
            v += coeffs.b_gen(i, g) * hist.gen_true(row, g);
            vp += coeffs.b_gen(i, g) * hist.gen_pred(row, g);
        }
        v *= (1.0 - alpha);
        vp *= (1.0 - alpha);
        for (std::size_t d = 0; d < nd; ++d) {
            v -= coeffs.b_load(i, d) * hist.load_true(row, d);
            vp -= coeffs.b_load(i, d) * hist.load_pred(row, d);
        }
        out.v_true.push_back(v);
        out.v_pred.push_back(vp);
    }
    if (out.size() < 2)
        throw InsufficientDataError("compute_uvc_samples: only " +
                                    std::to_string(out.size()) + " records at hour " +
                                    std::to_string(hour));
    return out;
}

double predict_uvc(const UvcCoefficients& coeffs, const std::vector<double>& chi_pred,
                   const std::vector<double>& zeta_pred, BusId bus, double alpha) {
    if (alpha < 0.0 || alpha > 1.0)
        throw InputError("predict_uvc: alpha must lie in [0, 1]");
    const int i = coeffs.index_of(bus);
    if (i < 0)
        throw InputError("predict_uvc: unknown bus " + std::to_string(bus));
    if (chi_pred.size() != coeffs.b_gen.cols() || zeta_pred.size() != coeffs.b_load.cols())
        throw InputError("predict_uvc: prediction vectors do not match the layout");

    double gen = 0.0;
    for (std::size_t g = 0; g < chi_pred.size(); ++g) gen += coeffs.b_gen(i, g) * chi_pred[g];
    double load = 0.0;
    for (std::size_t d = 0; d < zeta_pred.size(); ++d)
        load += coeffs.b_load(i, d) * zeta_pred[d];
    return (1.0 - alpha) * gen - load;
}

VoltageDecomposition decompose_voltage(const UvcCoefficients& coeffs,
                                       const InjectionLayout& layout,
                                       const std::vector<double>& chi,
                                       const std::vector<double>& zeta,
                                       const std::vector<double>& q, double v0, BusId bus,
                                       double alpha) {
    const int i = coeffs.index_of(bus);
    if (i < 0)
        throw InputError("decompose_voltage: unknown bus " + std::to_string(bus));
    if (chi.size() != coeffs.b_gen.cols() || zeta.size() != coeffs.b_load.cols() ||
        q.size() != layout.providers.size())
        throw InputError("decompose_voltage: vector sizes do not match the layout");

    VoltageDecomposition d;
    d.v_r = predict_uvc(coeffs, chi, zeta, bus, alpha);
    for (std::size_t j = 0; j < layout.providers.size(); ++j)
        d.v_c += coeffs.b_q(i, j) * q[j] + coeffs.b_p(i, j) * layout.providers[j].p_fixed;
    d.v_o = v0;
    for (std::size_t g = 0; g < layout.constant_gens.size(); ++g)
        d.v_o += coeffs.b_const_gen(i, g) * layout.constant_gens[g].p;
    for (std::size_t l = 0; l < layout.constant_loads.size(); ++l)
        d.v_o -= coeffs.b_const_load(i, l) * layout.constant_loads[l].p;
    return d;
}

std::vector<double> baseline_point_predictor(const std::vector<double>& series, int horizon) {
    if (series.size() < 48)
        throw InsufficientDataError("baseline_point_predictor: need at least 48 hourly "
                                    "values, got " +
                                    std::to_string(series.size()));
    if (horizon < 0)
        throw InputError("baseline_point_predictor: negative horizon");
    std::vector<double> extended = series;
    extended.reserve(series.size() + static_cast<std::size_t>(horizon));
    for (int k = 0; k < horizon; ++k)
        extended.push_back(extended[extended.size() - 24]);
    return std::vector<double>(extended.begin() + static_cast<std::ptrdiff_t>(series.size()),
                               extended.end());
}

namespace {

// Epoch hours from an integer or an ISO-like datetime.
std::int64_t parse_timestamp(const std::string& s, const std::string& where) {
    if (s.find_first_of("-T :") == std::string::npos) {
        try {
            std::size_t pos = 0;
            const long long v = std::stoll(s, &pos);
            if (pos == s.size()) return v;
        } catch (...) {
        }
        throw InputError(where + ": bad timestamp '" + s + "'");
    }
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, sec = 0;
    const int n = std::sscanf(s.c_str(), "%d-%d-%d%*1[T ]%d:%d:%d", &y, &mo, &d, &h, &mi, &sec);
    if (n < 4)
        throw InputError(where + ": bad timestamp '" + s + "'");
    if (mi != 0 || sec != 0)
        throw InputError(where + ": timestamp '" + s + "' is not hour-aligned");
    // Days-from-civil (Howard Hinnant).
    const int yy = y - (mo <= 2 ? 1 : 0);
    const int era = (yy >= 0 ? yy : yy - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(yy - era * 400);
    const unsigned doy = static_cast<unsigned>((153 * (mo + (mo > 2 ? -3 : 9)) + 2) / 5 + d - 1);
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    const std::int64_t days = static_cast<std::int64_t>(era) * 146097 +
                              static_cast<std::int64_t>(doe) - 719468;
    return days * 24 + h;
}

}  // namespace

InjectionSeries load_series_csv(const std::string& path, const InjectionLayout& layout,
                                bool* used_baseline) {
    const CsvTable t = read_csv(path);
    const int cts = t.column("timestamp");
    const int cid = t.column("id");
    const int ctrue = t.column("true");
    const int cpred = t.column("predicted");
    if (cts < 0 || cid < 0 || ctrue < 0)
        throw InputError(path + ": header must be timestamp,id,true[,predicted]");
    const bool have_pred = cpred >= 0;
    if (used_baseline) *used_baseline = !have_pred;

    std::map<std::string, std::pair<bool, std::size_t>> unit_index;  // id -> (is_gen, col)
    for (std::size_t g = 0; g < layout.uncertain_gens.size(); ++g)
        unit_index[layout.uncertain_gens[g].id] = {true, g};
    for (std::size_t d = 0; d < layout.uncertain_loads.size(); ++d)
        unit_index[layout.uncertain_loads[d].id] = {false, d};

    std::vector<std::int64_t> ts;
    std::map<std::int64_t, std::size_t> ts_row;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const std::int64_t h = parse_timestamp(
            t.rows[r][cts], path + ":" + std::to_string(t.line_numbers[r]));
        if (!ts_row.count(h)) {
            if (!ts.empty() && h <= ts.back())
                throw InputError(path + ":" + std::to_string(t.line_numbers[r]) +
                                 ": timestamps must be strictly increasing");
            ts_row[h] = ts.size();
            ts.push_back(h);
        }
    }

    const std::size_t n = ts.size();
    const std::size_t ng = layout.uncertain_gens.size();
    const std::size_t nd = layout.uncertain_loads.size();
    const double nan = std::nan("");
    InjectionSeries s;
    s.t = ts;
    for (const auto& u : layout.uncertain_gens) s.gen_ids.push_back(u.id);
    for (const auto& u : layout.uncertain_loads) s.load_ids.push_back(u.id);
    s.gen_true = Matrix(n, ng, nan);
    s.gen_pred = Matrix(n, ng, nan);
    s.load_true = Matrix(n, nd, nan);
    s.load_pred = Matrix(n, nd, nan);

    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const std::string& id = t.rows[r][cid];
        const auto it = unit_index.find(id);
        if (it == unit_index.end())
            throw InputError(path + ":" + std::to_string(t.line_numbers[r]) +
                             ": id '" + id + "' is not an uncertain unit in the layout");
        const std::int64_t h = parse_timestamp(
            t.rows[r][cts], path + ":" + std::to_string(t.line_numbers[r]));
        const std::size_t row = ts_row.at(h);
        const double v = csv_double(t, r, ctrue);
        const double vp = have_pred ? csv_double(t, r, cpred) : nan;
        if (it->second.first) {
            s.gen_true(row, it->second.second) = v;
            s.gen_pred(row, it->second.second) = vp;
        } else {
            s.load_true(row, it->second.second) = v;
            s.load_pred(row, it->second.second) = vp;
        }
    }

    auto require_dense = [&](const Matrix& m, const std::vector<std::string>& ids) {
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j)
                if (std::isnan(m(i, j)))
                    throw InputError(path + ": missing record for id '" + ids[j] +
                                     "' at timestamp " + std::to_string(ts[i]));
    };
    require_dense(s.gen_true, s.gen_ids);
    require_dense(s.load_true, s.load_ids);

    if (!have_pred) {
        // Persistence fallback: prediction at t is the true value at t - 24h.
        // Rows whose t - 24h is absent from the file are dropped.
        if (n < 48)
            throw InsufficientDataError(path + ": persistence fallback needs at least 48 "
                                        "hours of history");
        std::vector<std::size_t> keep;
        for (std::size_t row = 0; row < n; ++row) {
            const auto prev = ts_row.find(ts[row] - 24);
            if (prev == ts_row.end()) continue;
            for (std::size_t g = 0; g < ng; ++g)
                s.gen_pred(row, g) = s.gen_true(prev->second, g);
            for (std::size_t d = 0; d < nd; ++d)
                s.load_pred(row, d) = s.load_true(prev->second, d);
            keep.push_back(row);
        }
        if (keep.size() < 2)
            throw InsufficientDataError(path + ": persistence fallback left fewer than 2 "
                                        "usable rows");
        InjectionSeries trimmed;
        trimmed.gen_ids = s.gen_ids;
        trimmed.load_ids = s.load_ids;
        trimmed.gen_true = Matrix(keep.size(), ng);
        trimmed.gen_pred = Matrix(keep.size(), ng);
        trimmed.load_true = Matrix(keep.size(), nd);
        trimmed.load_pred = Matrix(keep.size(), nd);
        for (std::size_t i = 0; i < keep.size(); ++i) {
            trimmed.t.push_back(s.t[keep[i]]);
            for (std::size_t g = 0; g < ng; ++g) {
                trimmed.gen_true(i, g) = s.gen_true(keep[i], g);
                trimmed.gen_pred(i, g) = s.gen_pred(keep[i], g);
            }
            for (std::size_t d = 0; d < nd; ++d) {
                trimmed.load_true(i, d) = s.load_true(keep[i], d);
                trimmed.load_pred(i, d) = s.load_pred(keep[i], d);
            }
        }
        s = std::move(trimmed);
    } else {
        require_dense(s.gen_pred, s.gen_ids);
        require_dense(s.load_pred, s.load_ids);
    }

    s.validate();
    return s;
}

}  // namespace voltrisk
