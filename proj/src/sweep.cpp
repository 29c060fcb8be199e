#include "dnarate/sweep.hpp"

#include "dnarate/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace dnarate {

namespace {

std::vector<double> alpha_grid(double start, double stop, double step) {
    std::vector<double> out;
    if (step <= 0) throw invalid_context("alpha step must be positive");
    for (int i = 0;; ++i) {
        double a = start + i * step;
        if (a > stop + step * 0.5) break;
        out.push_back(a);
    }
    if (out.empty()) throw invalid_context("empty alpha grid");
    return out;
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::vector<RegimePoint> sweep_homopolymer(const HomopolymerSweepConfig& config,
                                           uint64_t master_seed) {
    if (config.m_list.empty()) throw invalid_context("empty m list");
    if (config.base_p <= 0 || config.base_p > kRateCap)
        throw invalid_context("base_p outside (0, 0.75]");
    if (config.replicates < 1) throw invalid_context("replicates must be >= 1");
    auto alphas = alpha_grid(config.alpha_start, config.alpha_stop, config.alpha_step);

    struct Cell { int m; double alpha; };
    std::vector<Cell> cells;
    for (int m : config.m_list)
        for (double a : alphas) cells.push_back({m, a});

    std::vector<RegimePoint> points(cells.size());
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= cells.size()) return;
            const Cell& cell = cells[i];
            GrowthModel model;
            model.kind = config.kind;
            model.alpha = cell.alpha;
            model.base_p = config.base_p;

            HiddenMarkovChannel hmm = build_hmm(cell.m, model);
            double value_sum = 0, se2_sum = 0;
            std::vector<double> values;
            bool achieved = true;
            for (int rep = 0; rep < config.replicates; ++rep) {
                uint64_t seed = derive_seed(master_seed, i * 1024 + rep);
                EntropyEstimate est = estimate_output_entropy(hmm, config.estimator, seed);
                value_sum += est.value;
                se2_sum += est.stderr_ * est.stderr_;
                values.push_back(est.value);
                achieved = achieved && est.achieved;
            }
            int k = config.replicates;
            EntropyEstimate avg;
            avg.value = value_sum / k;
            avg.stderr_ = std::sqrt(se2_sum) / k;
            avg.m = cell.m;
            avg.model = model;
            if (k > 1) {
                double var = 0;
                for (double v : values) var += (v - avg.value) * (v - avg.value);
                var /= (k - 1);
                avg.stderr_ = std::max(avg.stderr_, std::sqrt(var / k));
            }

            ConstrainedRate rc = achievable_rate_constrained(cell.m, model, avg);
            RateResult ru = achievable_rate_unconstrained(model);

            RegimePoint& pt = points[i];
            pt.family = "homopolymer";
            pt.constraint = cell.m;
            pt.kind = model.kind_name();
            pt.alpha = cell.alpha;
            pt.base_p = config.base_p;
            pt.r_u = ru.rate;
            pt.r_c = rc.rate;
            pt.diff = pt.r_u - pt.r_c;
            pt.uncertainty = rc.uncertainty;
            pt.achieved = achieved;
        }
    };

    int threads = config.threads > 0 ? config.threads
                                     : std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return points;
}

std::vector<RegimePoint> sweep_gc(const GcSweepConfig& config) {
    if (config.n_list.empty() || config.epsilon_list.empty())
        throw invalid_context("empty gc sweep grid");
    if (config.alpha_stop >= 10.0)
        throw invalid_context("gc sweep alpha grid must stay within [0, 10)");
    auto alphas = alpha_grid(config.alpha_start, config.alpha_stop, config.alpha_step);

    std::vector<RegimePoint> points;
    for (int n : config.n_list)
        for (double eps : config.epsilon_list)
            for (double a : alphas) {
                GrowthModel model = make_growth_model("parabolic", a, config.base_p);
                DSelection sel_c = expected_error_distance(n, eps, model, config.dpolicy);
                DSelection sel_u = expected_error_distance(n, 0.5, model, config.dpolicy);
                GVResult rc = gv_rate_constrained(n, sel_c.d, eps);
                GVResult ru = gv_rate_constrained(n, sel_u.d, 0.5);

                RegimePoint pt;
                pt.family = "gc";
                pt.constraint = eps;
                pt.kind = model.kind_name();
                pt.alpha = a;
                pt.base_p = config.base_p;
                pt.n = n;
                pt.r_u = ru.rate;
                pt.r_c = rc.rate;
                pt.diff = pt.r_u - pt.r_c;
                pt.uncertainty = 0;
                pt.d_u = sel_u.d;
                pt.d_c = sel_c.d;
                points.push_back(pt);
            }
    return points;
}

std::vector<Crossing> find_crossing(const std::vector<RegimePoint>& series) {
    std::vector<Crossing> out;
    auto interp = [](double a1, double d1, double a2, double d2) {
        return a1 + (a2 - a1) * (0 - d1) / (d2 - d1);
    };
    for (size_t i = 0; i + 1 < series.size(); ++i) {
        const RegimePoint& p = series[i];
        const RegimePoint& q = series[i + 1];
        if (q.alpha < p.alpha) throw invalid_context("series must be sorted by alpha");
        bool sign_change = (p.diff > 0 && q.diff < 0) || (p.diff < 0 && q.diff > 0);
        if (p.diff == 0) {
            out.push_back({p.alpha, p.alpha, p.alpha});
            continue;
        }
        if (!sign_change) continue;
        Crossing c;
        c.alpha = interp(p.alpha, p.diff, q.alpha, q.diff);
        // Envelope crossings of diff +/- uncertainty bound the interval.
        c.lo = p.alpha;
        c.hi = q.alpha;
        double up1 = p.diff + p.uncertainty, up2 = q.diff + q.uncertainty;
        double dn1 = p.diff - p.uncertainty, dn2 = q.diff - q.uncertainty;
        double bound_a = (up1 > 0) == (up2 > 0) ? (p.diff > 0 ? q.alpha : p.alpha)
                                                : interp(p.alpha, up1, q.alpha, up2);
        double bound_b = (dn1 > 0) == (dn2 > 0) ? (p.diff > 0 ? p.alpha : q.alpha)
                                                : interp(p.alpha, dn1, q.alpha, dn2);
        c.lo = std::max(p.alpha, std::min(bound_a, bound_b));
        c.hi = std::min(q.alpha, std::max(bound_a, bound_b));
        out.push_back(c);
    }
    return out;
}

void emit_map(const std::vector<RegimePoint>& points, MapFormat format, std::ostream& out) {
    if (points.empty()) throw invalid_context("no points to emit");
    switch (format) {
        case MapFormat::Csv: {
            out << "family,constraint,kind,alpha,p,n,R_u,R_c,diff,uncertainty,d_u,d_c\n";
            for (const auto& p : points)
                out << p.family << ',' << fmt_double(p.constraint) << ',' << p.kind << ','
                    << fmt_double(p.alpha) << ',' << fmt_double(p.base_p) << ',' << p.n << ','
                    << fmt_double(p.r_u) << ',' << fmt_double(p.r_c) << ',' << fmt_double(p.diff)
                    << ',' << fmt_double(p.uncertainty) << ',' << p.d_u << ',' << p.d_c << '\n';
            break;
        }
        case MapFormat::Json: {
            nlohmann::json arr = nlohmann::json::array();
            for (const auto& p : points)
                arr.push_back({{"family", p.family},
                               {"constraint", p.constraint},
                               {"kind", p.kind},
                               {"alpha", p.alpha},
                               {"p", p.base_p},
                               {"n", p.n},
                               {"R_u", p.r_u},
                               {"R_c", p.r_c},
                               {"diff", p.diff},
                               {"uncertainty", p.uncertainty},
                               {"d_u", p.d_u},
                               {"d_c", p.d_c}});
            out << arr.dump(2) << '\n';
            break;
        }
        case MapFormat::SvgHeatmap: {
            // Rows: distinct constraints in input order; columns: alphas.
            std::vector<double> rows, cols;
            for (const auto& p : points) {
                if (std::find(rows.begin(), rows.end(), p.constraint) == rows.end())
                    rows.push_back(p.constraint);
                if (std::find(cols.begin(), cols.end(), p.alpha) == cols.end())
                    cols.push_back(p.alpha);
            }
            std::sort(cols.begin(), cols.end());
            const int cw = 10, ch = 24, mx = 60, my = 20;
            int width = mx + int(cols.size()) * cw + 10;
            int height = my + int(rows.size()) * ch + 30;
            out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
                << "\" height=\"" << height << "\">\n";
            for (const auto& p : points) {
                size_t r = std::find(rows.begin(), rows.end(), p.constraint) - rows.begin();
                size_t c = std::find(cols.begin(), cols.end(), p.alpha) - cols.begin();
                double band = std::max(p.uncertainty, 0.005);
                // Purple: unconstrained wins; orange: constrained wins;
                // gray: within the similar-performance band.
                const char* color = std::abs(p.diff) <= band ? "#b0b0b0"
                                    : p.diff > 0            ? "#9b59b6"
                                                            : "#e67e22";
                out << "<rect x=\"" << mx + int(c) * cw << "\" y=\"" << my + int(r) * ch
                    << "\" width=\"" << cw << "\" height=\"" << ch << "\" fill=\"" << color
                    << "\"/>\n";
            }
            for (size_t r = 0; r < rows.size(); ++r)
                out << "<text x=\"4\" y=\"" << my + int(r) * ch + ch / 2 + 4
                    << "\" font-size=\"11\">" << (points[0].family == "gc" ? "eps=" : "m=")
                    << fmt_double(rows[r]) << "</text>\n";
            out << "<text x=\"" << mx << "\" y=\"" << height - 8 << "\" font-size=\"11\">alpha "
                << fmt_double(cols.front()) << " .. " << fmt_double(cols.back()) << "</text>\n";
            out << "</svg>\n";
            break;
        }
    }
}

void emit_map_file(const std::vector<RegimePoint>& points, MapFormat format,
                   const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    emit_map(points, format, out);
}

std::vector<RegimePoint> parse_map_csv(std::istream& in) {
    std::vector<RegimePoint> points;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (header) {
            header = false;
            continue;
        }
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) f.push_back(tok);
        if (f.size() != 12) throw std::runtime_error("malformed map csv row: " + line);
        RegimePoint p;
        p.family = f[0];
        p.constraint = std::stod(f[1]);
        p.kind = f[2];
        p.alpha = std::stod(f[3]);
        p.base_p = std::stod(f[4]);
        p.n = std::stoi(f[5]);
        p.r_u = std::stod(f[6]);
        p.r_c = std::stod(f[7]);
        p.diff = std::stod(f[8]);
        p.uncertainty = std::stod(f[9]);
        p.d_u = std::stoi(f[10]);
        p.d_c = std::stoi(f[11]);
        points.push_back(p);
    }
    return points;
}

}  // namespace dnarate
