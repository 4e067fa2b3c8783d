#include "fol/tracer.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace fol {

namespace {

using State = std::array<cplx, 2>;

double state_norm(const State& s) { return std::max(std::abs(s[0]), std::abs(s[1])); }

State operator+(const State& a, const State& b) { return {a[0] + b[0], a[1] + b[1]}; }
State operator*(double c, const State& a) { return {c * a[0], c * a[1]}; }

double field_scale(const ChartForm& cf, const ComplexPoint& p) {
    double np = 1.0 + std::max(std::abs(p[0]), std::abs(p[1]));
    int deg = std::max(cf.alpha.degree(), cf.beta.degree());
    double coeff = std::max({1e-300, cf.alpha.coeff_norm(), cf.beta.coeff_norm()});
    return coeff * std::pow(np, deg);
}

} // namespace

std::array<cplx, 2> line_field_at(const FoliationForm& f, int chart, const ComplexPoint& p) {
    if (p.size() != 2) throw Error("arity", "chart point must have 2 coordinates");
    const ChartForm& cf = f.chart(chart);
    auto X = cf.direction_at(p[0], p[1]);
    double n = std::sqrt(std::norm(X[0]) + std::norm(X[1]));
    if (n < 1e-9 * field_scale(cf, p))
        throw Error("at-singularity", "line field vanishes at this point");
    return {X[0] / n, X[1] / n};
}

std::size_t LeafTrace::point_count() const {
    std::size_t n = 0;
    for (const auto& s : segments) n += s.points.size();
    return n;
}

namespace {

// singular points per chart, cached on the form's coefficient content
std::string form_key(const FoliationForm& f, int chart) {
    std::ostringstream os;
    os.precision(17);
    os << chart;
    for (int i = 0; i < 3; ++i)
        for (const auto& [e, c] : f.a(i).terms()) {
            for (int k : e) os << ',' << k;
            os << ':' << c.real() << ':' << c.imag();
        }
    return os.str();
}

const std::vector<SingularPoint>& singular_cache(const FoliationForm& f, int chart) {
    static thread_local std::map<std::string, std::vector<SingularPoint>> cache;
    std::string key = form_key(f, chart);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::vector<SingularPoint> pts;
    try {
        pts = singular_points(f, chart).points;
    } catch (const Error&) {
        // positive-dimensional locus: leave empty, the field-magnitude guard
        // still protects the stepper
    }
    return cache.emplace(std::move(key), std::move(pts)).first->second;
}

double nearest_singular(const FoliationForm& f, int chart, const State& p,
                        ComplexPoint* where) {
    double best = 1e300;
    for (const auto& s : singular_cache(f, chart)) {
        double d = std::max(std::abs(p[0] - s.location[0]), std::abs(p[1] - s.location[1]));
        if (d < best) {
            best = d;
            if (where) *where = s.location;
        }
    }
    return best;
}

// tangent transport across a chart transition, by directional difference
State transport_direction(const State& p, const State& dir, int from, int to) {
    const double eps = 1e-7;
    ComplexPoint base = {p[0], p[1]};
    ComplexPoint moved = {p[0] + eps * dir[0], p[1] + eps * dir[1]};
    auto qb = to_chart(base, from, to);
    auto qm = to_chart(moved, from, to);
    State out = {(qm[0] - qb[0]) / eps, (qm[1] - qb[1]) / eps};
    double n = state_norm(out);
    if (n == 0.0) return {1.0, 0.0};
    return {out[0] / n, out[1] / n};
}

} // namespace

LeafTrace trace_leaf(const FoliationForm& f, int chart, const ComplexPoint& start,
                     double arc_horizon, const TraceOptions& opt) {
    if (start.size() != 2) throw Error("arity", "start point must have 2 coordinates");
    // starting at a singular point is an error; elsewhere the stop radius rules
    line_field_at(f, chart, start);

    LeafTrace trace;
    trace.segments.push_back({chart, {start}, {0.0}});

    State p = {start[0], start[1]};
    int k = chart;
    double s = 0.0;
    double h = opt.max_step;

    // The chart's canonical section (beta, -alpha)/|.| is smooth away from
    // singular points; the trace follows a fixed phase rotation of it,
    // re-expressed in the new chart at every switch.
    cplx phase;
    {
        double m = std::abs(opt.direction);
        if (m == 0.0) throw Error("arity", "direction phase must be nonzero");
        phase = opt.direction / m;
    }
    auto unit_field = [&](const State& q) -> State {
        const ChartForm& cf = f.chart(k);
        auto X = cf.direction_at(q[0], q[1]);
        double n = std::sqrt(std::norm(X[0]) + std::norm(X[1]));
        if (n < 1e-300) throw Error("at-singularity", "field vanished mid-step");
        return {phase * X[0] / n, phase * X[1] / n};
    };
    State dir0 = unit_field(p);

    // Dormand-Prince 5(4)
    static const double a[7][6] = {
        {},
        {1.0 / 5},
        {3.0 / 40, 9.0 / 40},
        {44.0 / 45, -56.0 / 15, 32.0 / 9},
        {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
        {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
        {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
    static const double b5[7] = {35.0 / 384,    0.0,        500.0 / 1113, 125.0 / 192,
                                 -2187.0 / 6784, 11.0 / 84, 0.0};
    static const double b4[7] = {5179.0 / 57600, 0.0,          7571.0 / 16695, 393.0 / 640,
                                 -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

    while (s < arc_horizon) {
        if (trace.point_count() > static_cast<std::size_t>(opt.max_points)) break;
        h = std::min({h, opt.max_step, arc_horizon - s});
        if (h < opt.min_step) {
            trace.reason = StopReason::stiff_failure;
            trace.final_direction = dir0;
            return trace;
        }

        State kst[7];
        bool degenerate = false;
        try {
            kst[0] = unit_field(p);
            for (int i = 1; i < 7; ++i) {
                State q = p;
                for (int j = 0; j < i; ++j) q = q + (h * a[i][j]) * kst[j];
                kst[i] = unit_field(q);
            }
        } catch (const Error&) {
            degenerate = true;
        }
        if (degenerate) {
            trace.reason = StopReason::stiff_failure;
            trace.final_direction = dir0;
            return trace;
        }

        State y5 = p, y4 = p;
        for (int i = 0; i < 7; ++i) {
            y5 = y5 + (h * b5[i]) * kst[i];
            y4 = y4 + (h * b4[i]) * kst[i];
        }
        double err = state_norm({y5[0] - y4[0], y5[1] - y4[1]});
        double tol = opt.rel_tol * (1.0 + state_norm(y5));
        if (err > tol) {
            h *= std::max(0.2, 0.9 * std::pow(tol / (err + 1e-300), 0.2));
            continue;
        }

        p = y5;
        s += h;
        dir0 = kst[6];
        trace.segments.back().points.push_back({p[0], p[1]});
        trace.segments.back().arc.push_back(s);
        if (err > 0.0) h *= std::min(5.0, 0.9 * std::pow(tol / err, 0.2));

        ComplexPoint hit;
        double d = nearest_singular(f, k, p, &hit);
        if (d < opt.r_stop) {
            trace.reason = StopReason::near_singularity;
            trace.nearest_singularity = hit;
            trace.singularity_distance = d;
            trace.total_arc = s;
            trace.final_direction = dir0;
            return trace;
        }

        if (std::max(std::abs(p[0]), std::abs(p[1])) > opt.chart_switch) {
            ComplexPoint cp = {p[0], p[1]};
            int nk = best_chart(cp, k);
            if (nk != k) {
                auto np = to_chart(cp, k, nk);
                State moved = transport_direction(p, dir0, k, nk);
                p = {np[0], np[1]};
                k = nk;
                // recover the phase against the new chart's canonical section
                cplx hold = phase;
                phase = 1.0;
                State canon = unit_field(p);
                cplx ip = moved[0] * std::conj(canon[0]) + moved[1] * std::conj(canon[1]);
                phase = std::abs(ip) > 1e-14 ? ip / std::abs(ip) : hold;
                dir0 = unit_field(p);
                trace.segments.push_back({k, {np}, {s}});
            }
        }
    }
    trace.reason = StopReason::horizon;
    trace.total_arc = s;
    trace.final_direction = dir0;
    return trace;
}

FlowBoxGrid default_grid(const FoliationForm& f, int chart, double extent, int per_axis,
                         double radius, double r_sing) {
    FlowBoxGrid grid;
    grid.r_sing = r_sing;
    const auto& sing = singular_cache(f, chart);
    const ChartForm& cf = f.chart(chart);
    for (int iz = 0; iz < per_axis; ++iz) {
        for (int iw = 0; iw < per_axis; ++iw) {
            double cz = per_axis == 1 ? 0.0 : -extent + 2.0 * extent * iz / (per_axis - 1);
            double cw = per_axis == 1 ? 0.0 : -extent + 2.0 * extent * iw / (per_axis - 1);
            FlowBox box{chart, cz, cw, radius, radius};
            bool ok = true;
            for (const auto& sp : sing) {
                double d = std::max(std::abs(box.center_z - sp.location[0]),
                                    std::abs(box.center_w - sp.location[1]));
                if (d < radius + r_sing) ok = false;
            }
            if (!ok) continue;
            // transversal must stay transverse: |beta| bounded below on a probe grid
            for (int gz = 0; gz < 4 && ok; ++gz)
                for (int gw = 0; gw < 4 && ok; ++gw) {
                    cplx z = box.center_z + radius * (gz / 1.5 - 1.0);
                    cplx w = box.center_w + radius * (gw / 1.5 - 1.0);
                    cplx beta = cf.beta_f.eval(z, w);
                    cplx alpha = cf.alpha_f.eval(z, w);
                    double n = std::hypot(std::abs(alpha), std::abs(beta));
                    if (std::abs(beta) < 0.05 * n) ok = false;
                }
            if (ok) grid.boxes.push_back(box);
        }
    }
    return grid;
}

cplx continue_graph(const FoliationForm& f, int chart, cplx z0, cplx w0, cplx z1, int steps) {
    const ChartForm& cf = f.chart(chart);
    auto slope = [&](cplx z, cplx w) {
        cplx beta = cf.beta_f.eval(z, w);
        cplx alpha = cf.alpha_f.eval(z, w);
        double n = std::hypot(std::abs(alpha), std::abs(beta));
        if (std::abs(beta) < 1e-9 * std::max(n, 1e-280))
            throw Error("bad-axis", "leaf is not a graph over the z axis here");
        return -alpha / beta;
    };
    cplx dz = (z1 - z0) / static_cast<double>(steps);
    cplx z = z0, w = w0;
    for (int i = 0; i < steps; ++i) {
        cplx k1 = slope(z, w);
        cplx k2 = slope(z + 0.5 * dz, w + 0.5 * dz * k1);
        cplx k3 = slope(z + 0.5 * dz, w + 0.5 * dz * k2);
        cplx k4 = slope(z + dz, w + dz * k3);
        w += dz / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        z += dz;
    }
    return w;
}

std::vector<PlaqueHit> extract_plaques(const LeafTrace& trace, const FoliationForm& f,
                                       const FlowBoxGrid& grid) {
    std::vector<PlaqueHit> out;
    for (std::size_t bi = 0; bi < grid.boxes.size(); ++bi) {
        const FlowBox& box = grid.boxes[bi];
        for (const auto& seg : trace.segments) {
            if (seg.chart != box.chart) continue;
            std::size_t i = 0;
            while (i < seg.points.size()) {
                if (!box.contains(seg.points[i][0], seg.points[i][1])) {
                    ++i;
                    continue;
                }
                PlaqueHit hit;
                hit.box = static_cast<int>(bi);
                std::size_t j = i;
                while (j < seg.points.size() &&
                       box.contains(seg.points[j][0], seg.points[j][1])) {
                    hit.points.push_back(seg.points[j]);
                    ++j;
                }
                // graph check along the run: the tangent must keep a z-component
                const ChartForm& cf = f.chart(box.chart);
                for (const auto& q : hit.points) {
                    auto X = cf.direction_at(q[0], q[1]);
                    double n = std::hypot(std::abs(X[0]), std::abs(X[1]));
                    if (std::abs(X[0]) < 0.02 * n) {
                        hit.bad_axis = true;
                        break;
                    }
                }
                if (!hit.bad_axis) {
                    // transversal crossing: continue from the sample nearest in z
                    std::size_t best = 0;
                    double bd = 1e300;
                    for (std::size_t q = 0; q < hit.points.size(); ++q) {
                        double d = std::abs(hit.points[q][0] - box.center_z);
                        if (d < bd) {
                            bd = d;
                            best = q;
                        }
                    }
                    try {
                        hit.alpha = continue_graph(f, box.chart, hit.points[best][0],
                                                   hit.points[best][1], box.center_z);
                    } catch (const Error&) {
                        hit.bad_axis = true;
                    }
                }
                out.push_back(std::move(hit));
                i = j;
            }
        }
    }
    return out;
}

} // namespace fol
