#pragma once

#include <vector>

#include "fol/foliation.hpp"

namespace fol {

// Unit directing vector at p (X = (beta, -alpha) normalized). Errors
// "at-singularity" when the field magnitude vanishes at the point's scale.
std::array<cplx, 2> line_field_at(const FoliationForm& f, int chart, const ComplexPoint& p);

struct TraceOptions {
    double rel_tol = 1e-9;
    double r_stop = 1e-4;      // stop radius around singular points
    double chart_switch = 1.5; // |z| or |w| beyond this switches chart
    cplx direction{1.0, 0.0};  // initial phase of the line field
    double max_step = 0.05;
    double min_step = 1e-12;
    double max_points = 2e6;
};

enum class StopReason { horizon, near_singularity, stiff_failure, left_all_charts };

struct TraceSegment {
    int chart = 0;
    std::vector<ComplexPoint> points;
    std::vector<double> arc; // arc-parameter stamps
};

struct LeafTrace {
    std::vector<TraceSegment> segments;
    StopReason reason = StopReason::horizon;
    std::array<cplx, 2> final_direction{};
    ComplexPoint nearest_singularity; // set for near_singularity
    double singularity_distance = 0.0;
    double total_arc = 0.0;

    const ComplexPoint& last_point() const { return segments.back().points.back(); }
    int last_chart() const { return segments.back().chart; }
    std::size_t point_count() const;
};

// Integrate the leaf through `start` as a line field (Dormand-Prince 5(4),
// phase fixed by continuity) until the arc horizon, a singular point, or a
// step-size underflow ("stiff-failure" is recorded, not thrown).
LeafTrace trace_leaf(const FoliationForm& f, int chart, const ComplexPoint& start,
                     double arc_horizon, const TraceOptions& opt = {});

struct FlowBox {
    int chart = 0;
    cplx center_z, center_w;
    double rz = 0.2, rw = 0.2;
    // leaf-direction axis: z; transversal axis: the w-disc at z = center_z
    bool contains(cplx z, cplx w) const {
        return std::abs(z - center_z) < rz && std::abs(w - center_w) < rw;
    }
};

struct FlowBoxGrid {
    std::vector<FlowBox> boxes;
    double r_sing = 0.05; // exclusion radius around singular points
};

// Boxes on a fixed lattice of centers, keeping only boxes that avoid the
// singular set by r_sing and whose transversal is nowhere tangent to the
// foliation (|beta| bounded below on a probe grid).
FlowBoxGrid default_grid(const FoliationForm& f, int chart, double extent = 1.2,
                         int per_axis = 3, double radius = 0.18, double r_sing = 0.05);

struct PlaqueHit {
    int box = -1;
    std::vector<ComplexPoint> points; // polyline inside the box
    cplx alpha;                       // crossing of the transversal axis
    bool bad_axis = false;            // fold over the leaf-direction axis
};

// Maximal connected sub-polylines of the trace inside each box; the crossing
// parameter is obtained by continuing dw/dz = -alpha/beta to z = center_z.
std::vector<PlaqueHit> extract_plaques(const LeafTrace& trace, const FoliationForm& f,
                                       const FlowBoxGrid& grid);

// Continue the leaf through (z0, w0) as a graph w(z) along the straight
// segment z0 -> z1 (4th order, `steps` substeps). Errors "bad-axis" when the
// graph degenerates (|beta| too small).
cplx continue_graph(const FoliationForm& f, int chart, cplx z0, cplx w0, cplx z1,
                    int steps = 16);

} // namespace fol
