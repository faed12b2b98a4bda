#include "gaurast/pe_model.hpp"

#include <cmath>
#include <stdexcept>

#include "gaurast/constants.hpp"

namespace gaurast {

namespace {

// Zero edge values are accepted only on top or left edges; same rule as the
// scalar reference path.
bool edge_top_left(float ex, float ey) { return (ey == 0.f && ex > 0.f) || ey < 0.f; }

inline void tally(ResourceCounters* c, int subtask, int add, int mul, int div, int exp) {
    if (!c) return;
    c->adds[subtask] += uint32_t(add);
    c->muls[subtask] += uint32_t(mul);
    c->divs[subtask] += uint32_t(div);
    c->exps[subtask] += uint32_t(exp);
}

PEResult execute_gaussian(const PEJob& job, ResourceCounters* cnt) {
    const float a = job.primitive[0], b = job.primitive[1], c = job.primitive[2];
    const float opacity = job.primitive[3];
    const float mx = job.primitive[4], my = job.primitive[5];
    const float cr = job.primitive[6], cg = job.primitive[7], cb = job.primitive[8];

    PEResult res;
    res.out = {job.state[0], job.state[1], job.state[2]};
    res.aux = job.state[3];

    // Subtask 1: coordinate shift.
    float dx = job.pixel.x - mx;
    float dy = job.pixel.y - my;
    tally(cnt, 0, 2, 0, 0, 0);

    // Subtask 2: Gaussian probability computation.
    float power = -0.5f * (a * (dx * dx) + c * (dy * dy)) - b * (dx * dy);
    if (power > 0.f) power = 0.f;
    float alpha = opacity * std::exp(power);
    if (alpha > kAlphaClamp) alpha = kAlphaClamp;
    tally(cnt, 1, 2, 8, 0, 1);

    if (alpha < kAlphaSkip) {
        res.skipped = true;
        return res;
    }

    // Subtask 3: color weight computation.
    float t = job.state[3];
    float w = t * alpha;
    float wr = w * cr;
    float wg = w * cg;
    float wb = w * cb;
    tally(cnt, 2, 0, 4, 0, 0);

    // Subtask 4: color accumulation.
    res.out[0] = job.state[0] + wr;
    res.out[1] = job.state[1] + wg;
    res.out[2] = job.state[2] + wb;
    t = t * (1.f - alpha);
    tally(cnt, 3, 4, 1, 0, 0);
    res.aux = t;
    if (t < kTransmittanceMin) res.terminated = true;
    return res;
}

PEResult execute_triangle(const PEJob& job, ResourceCounters* cnt) {
    const float x0 = job.primitive[0], y0 = job.primitive[1], iz0 = job.primitive[2];
    const float x1 = job.primitive[3], y1 = job.primitive[4], iz1 = job.primitive[5];
    const float x2 = job.primitive[6], y2 = job.primitive[7], iz2 = job.primitive[8];

    PEResult res;
    res.out = {job.state[0], job.state[1], job.state[2]};
    res.aux_id = job.aux_id;

    // Subtask 1: coordinate shift.
    float d0x = job.pixel.x - x0;
    float d0y = job.pixel.y - y0;
    float d2x = job.pixel.x - x2;
    float d2y = job.pixel.y - y2;
    float bx = x1 - x0;
    float by = y1 - y0;
    float cx = x0 - x2;
    float cy = y0 - y2;
    tally(cnt, 0, 8, 0, 0, 0);

    // Subtask 2: intersection detection.
    float e2 = bx * d0y - by * d0x;
    float e1 = cx * d2y - cy * d2x;
    float area = by * cx - bx * cy;
    float e0 = area - e1 - e2;
    float e0x = -(bx + cx);
    float e0y = -(by + cy);
    tally(cnt, 1, 7, 6, 0, 0);
    bool in0 = e0 > 0.f || (e0 == 0.f && edge_top_left(e0x, e0y));
    bool in1 = e1 > 0.f || (e1 == 0.f && edge_top_left(cx, cy));
    bool in2 = e2 > 0.f || (e2 == 0.f && edge_top_left(bx, by));
    if (!(in0 && in1 && in2)) {
        res.skipped = true;
        return res;
    }
    float inv_area = 1.f / area;
    tally(cnt, 1, 0, 0, 1, 0);

    // Subtask 3: UV weight computation and inverse-depth interpolation.
    float w0 = e0 * inv_area;
    float u = e1 * inv_area;
    float v = e2 * inv_area;
    float rz = (w0 * iz0 + u * iz1) + v * iz2;
    tally(cnt, 2, 2, 6, 0, 0);

    // Subtask 4: min-depth color hold (compare as subtraction).
    tally(cnt, 3, 1, 0, 0, 0);
    if (rz > job.state[2]) {
        res.out = {u, v, rz};
        res.aux_id = job.prim_id;
    } else {
        res.skipped = true;
    }
    return res;
}

}  // namespace

std::array<SubtaskOps, 4> pe_op_tally(PEMode mode) {
    if (mode == PEMode::Gaussian) {
        return {SubtaskOps{2, 0, 0, 0}, SubtaskOps{2, 8, 0, 1}, SubtaskOps{0, 4, 0, 0},
                SubtaskOps{4, 1, 0, 0}};
    }
    return {SubtaskOps{8, 0, 0, 0}, SubtaskOps{7, 6, 1, 0}, SubtaskOps{2, 6, 0, 0},
            SubtaskOps{1, 0, 0, 0}};
}

PEResult pe_execute(const PEJob& job, ResourceCounters* counters) {
    if (job.mode == PEMode::Gaussian) {
        // Gaussian payload must carry a positive-definite conic.
        const float a = job.primitive[0], b = job.primitive[1], c = job.primitive[2];
        if (!(a > 0.f && c > 0.f && a * c - b * b > 0.f))
            throw std::invalid_argument("pe_execute: Gaussian job without a positive-definite conic");
        return execute_gaussian(job, counters);
    }
    return execute_triangle(job, counters);
}

PEJob make_gaussian_job(const Splat2D& s, const PixelCoord& p, const Vec3f& color_acc,
                        float transmittance) {
    PEJob job;
    job.mode = PEMode::Gaussian;
    job.primitive = {s.conic_a, s.conic_b, s.conic_c, s.opacity,
                     s.mean.x,  s.mean.y,  s.color.x, s.color.y, s.color.z};
    job.pixel = p;
    job.state = {color_acc.x, color_acc.y, color_acc.z, transmittance};
    return job;
}

PEJob make_triangle_job(const ScreenTriangle& t, const PixelCoord& p, float u, float v,
                        float inv_depth, int32_t stored_id) {
    PEJob job;
    job.mode = PEMode::Triangle;
    job.primitive = {t.x0, t.y0, t.iz0, t.x1, t.y1, t.iz1, t.x2, t.y2, t.iz2};
    job.pixel = p;
    job.state = {u, v, inv_depth, 0.f};
    job.aux_id = stored_id;
    job.prim_id = t.id;
    return job;
}

}  // namespace gaurast
