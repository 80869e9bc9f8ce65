#pragma once

// Circular layout of clustered graphs (CiSE).
//
//  1. every cluster is laid out on its own circle (circular_order, radius_for,
//     place_on_circle);
//  2. the cluster graph (one round meta-node per circle, one node per
//     unclustered node) is laid out with the spring embedder;
//  3. circles translate and rotate as rigid bodies, with members pinned to
//     their slots, pulled by the inter-cluster edges of their out-nodes;
//  4. members may slide along their track and swap with an adjacent member
//     when that strictly reduces the number of crossings. Any step-4 move
//     that would add a crossing or an overlap is rejected.
//
// Unclustered nodes and circles are attracted to the middle of the bounding
// rectangle of the current drawing.

#include <chisio/geometry.hpp>
#include <chisio/layout/circular.hpp>
#include <chisio/layout/cose.hpp>
#include <chisio/layout/crossing.hpp>
#include <chisio/layout/layout.hpp>
#include <chisio/layout/lstructure.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace chisio::layout {

/// node id -> cluster id; nodes absent from the map are unclustered.
using ClusterAssignment = std::map<NodeId, std::string>;

enum class Mobility { Fixed, Flexible };

struct CircleMeta {
    std::string cluster_id;
    Point center;
    double radius = kMinCircleRadius;
    /// Members in angular order.
    std::vector<Index> members;
    double rotation = 0.0;
    /// Angle of each member relative to `rotation`, increasing with the order.
    std::vector<double> offsets;
    std::size_t intra_crossings = 0;

    double angle_of(std::size_t slot) const { return normalize_angle(rotation + offsets[slot]); }

    Point position(std::size_t slot) const {
        const double a = rotation + offsets[slot];
        return {center.x + radius * std::cos(a), center.y + radius * std::sin(a)};
    }
};

struct OnCircleNodeState {
    Index node = 0;
    double angle = 0.0;
    Mobility mobility = Mobility::Fixed;
};

struct CiseState {
    std::vector<CircleMeta> circles;
    /// Per l-node: owning circle and slot, if clustered.
    std::vector<std::optional<std::size_t>> circle_of;
    std::vector<std::size_t> slot_of;
    std::vector<Index> unclustered;
    std::vector<Index> intra_edges;
    std::vector<Index> inter_edges;
    Mobility mobility = Mobility::Fixed;

    std::vector<OnCircleNodeState> on_circle_nodes() const {
        std::vector<OnCircleNodeState> out;
        for (const auto& c : circles)
            for (std::size_t s = 0; s < c.members.size(); ++s) out.push_back({c.members[s], c.angle_of(s), mobility});
        return out;
    }
};

/// Checkpoints recorded by cise_run for inspection.
struct CiseTrace {
    std::vector<CircleMeta> after_step1;
    std::vector<CircleMeta> after_step2;
    std::vector<CircleMeta> after_step3;
    std::size_t crossings_after_step3 = 0;
    /// Total crossing count after every accepted step-4 move (swaps included).
    std::vector<std::size_t> step4_crossings;
    std::size_t swaps_accepted = 0;
    std::vector<CircleMeta> final_circles;
    std::size_t final_crossings = 0;
};

inline ClusterAssignment clusters_of(const LStructure& l) {
    ClusterAssignment out;
    for (const auto& n : l.nodes)
        if (n.cluster) out[n.id] = *n.cluster;
    return out;
}

namespace detail {

inline double node_diagonal(const LNode& n) { return std::hypot(n.rect.w, n.rect.h); }

inline void place_members(LStructure& l, const CircleMeta& c) {
    for (std::size_t s = 0; s < c.members.size(); ++s) {
        LNode& n = l.nodes[c.members[s]];
        n.rect = Rect::centered_at(c.position(s), n.rect.w, n.rect.h);
    }
}

inline void place_all(LStructure& l, const CiseState& st) {
    for (const auto& c : st.circles) place_members(l, c);
}

inline LNode circle_node(const CircleMeta& c) {
    LNode n;
    n.rect = Rect::centered_at(c.center, 2.0 * c.radius, 2.0 * c.radius);
    n.round = true;
    return n;
}

inline bool disk_overlaps_rect(Point center, double radius, const Rect& r) {
    return distance_to_rect(center, r) < radius;
}

inline std::size_t overlap_count(const LStructure& l, const CiseState& st) {
    std::size_t n = 0;
    for (Index u : st.unclustered)
        for (const auto& c : st.circles)
            if (disk_overlaps_rect(c.center, c.radius, l.nodes[u].rect)) ++n;
    return n;
}

/// Middle of the bounding rectangle of every node and circle.
inline Point drawing_center(const LStructure& l, const CiseState& st) {
    std::optional<Rect> u;
    auto add = [&u](const Rect& r) { u = u ? unite(*u, r) : r; };
    for (const auto& c : st.circles) add(Rect::centered_at(c.center, 2.0 * c.radius, 2.0 * c.radius));
    for (Index v : st.unclustered) add(l.nodes[v].rect);
    return u ? u->center() : Point{};
}

/// Crossings between segments of the edges incident to `touched` nodes and
/// every segment, each crossing pair counted once.
inline std::size_t incident_crossings(const LStructure& l, const std::vector<Index>& touched) {
    auto incident = [&](const LEdge& e) {
        return std::find(touched.begin(), touched.end(), e.source) != touched.end() ||
               std::find(touched.begin(), touched.end(), e.target) != touched.end();
    };
    std::size_t n = 0;
    for (Index i = 0; i < l.edges.size(); ++i) {
        const LEdge& ei = l.edges[i];
        if (ei.source == ei.target || !incident(ei)) continue;
        const Segment si{l.nodes[ei.source].center(), l.nodes[ei.target].center()};
        for (Index j = 0; j < l.edges.size(); ++j) {
            if (j == i) continue;
            const LEdge& ej = l.edges[j];
            if (ej.source == ej.target) continue;
            if (incident(ej) && j < i) continue;
            if (properly_intersect(si, {l.nodes[ej.source].center(), l.nodes[ej.target].center()})) ++n;
        }
    }
    return n;
}

inline void push_unclustered_off_circles(LStructure& l, const CiseState& st) {
    for (int pass = 0; pass < 100; ++pass) {
        bool moved = false;
        for (Index u : st.unclustered) {
            if (l.nodes[u].pinned) continue;
            for (const auto& c : st.circles) {
                Rect& r = l.nodes[u].rect;
                if (!disk_overlaps_rect(c.center, c.radius, r)) continue;
                Point dir = r.center() - c.center;
                const double len = dir.norm();
                dir = len < kMinDistance ? Point{1.0, 0.0} : dir / len;
                // Far enough that the disk cannot reach the rectangle.
                const double need = c.radius + std::hypot(r.w, r.h) / 2.0 + 1.0;
                const Point target = c.center + dir * std::max(need, len);
                r = Rect::centered_at(target, r.w, r.h);
                moved = true;
            }
        }
        if (!moved) return;
    }
}

inline Point capped(Point d, double cap) {
    const double len = d.norm();
    return len > cap ? d * (cap / len) : d;
}

struct RigidMotion {
    std::vector<Point> circle_shift;
    std::vector<double> circle_turn;
    std::vector<Point> node_shift;
    std::vector<double> slide;  // per l-node, used in step 4
    double moved = 0.0;
};

/// One iteration of rigid circle motion plus free unclustered motion; with
/// `slide` set, also the tangential sliding of members along their track.
inline RigidMotion rigid_motion(const LStructure& l, const CiseState& st, std::vector<double>& spin,
                                const ForceModel& fm, double cooling, bool slide, Rng& rng) {
    const std::size_t nc = st.circles.size();
    RigidMotion m;
    m.circle_shift.assign(nc, {});
    m.circle_turn.assign(nc, 0.0);
    m.node_shift.assign(l.nodes.size(), {});
    m.slide.assign(l.nodes.size(), 0.0);

    std::vector<Point> cf(nc), nf(l.nodes.size()), tangential(l.nodes.size());
    std::vector<double> torque(nc, 0.0);
    std::vector<LNode> disks;
    disks.reserve(nc);
    for (const auto& c : st.circles) disks.push_back(circle_node(c));

    for (Index ei : st.inter_edges) {
        const LEdge& e = l.edges[ei];
        if (e.source == e.target) continue;
        const ForcePair f = spring_force(l.nodes[e.source], l.nodes[e.target], e.ideal_length, fm, rng, e.weight);
        const Index ends[2] = {e.source, e.target};
        const Point fs[2] = {f.on_source, f.on_target};
        for (int k = 0; k < 2; ++k) {
            const Index v = ends[k];
            const Index other = ends[1 - k];
            if (auto c = st.circle_of[v]) {
                cf[*c] += fs[k];
                const Point arm = l.nodes[v].center() - st.circles[*c].center;
                // Rotation follows the pull towards the external neighbour.
                const Point pull = (l.nodes[other].center() - l.nodes[v].center()) * fm.spring_constant * e.weight;
                // |arm| |pull| times the signed angle between them: equal to
                // the cross product near alignment, but not zero when the
                // neighbour sits diametrically opposite.
                torque[*c] += arm.norm() * pull.norm() * std::atan2(cross(arm, pull), dot(arm, pull));
                tangential[v] += pull;
            } else {
                nf[v] += fs[k];
            }
        }
    }

    for (std::size_t a = 0; a < nc; ++a)
        for (std::size_t b = a + 1; b < nc; ++b) {
            const ForcePair f = repulsion_force(disks[a], disks[b], fm, rng);
            cf[a] += f.on_source;
            cf[b] += f.on_target;
        }
    for (Index u : st.unclustered) {
        for (std::size_t c = 0; c < nc; ++c) {
            const ForcePair f = repulsion_force(l.nodes[u], disks[c], fm, rng);
            nf[u] += f.on_source;
            cf[c] += f.on_target;
        }
    }
    for (std::size_t i = 0; i < st.unclustered.size(); ++i)
        for (std::size_t j = i + 1; j < st.unclustered.size(); ++j) {
            const Index a = st.unclustered[i];
            const Index b = st.unclustered[j];
            const ForcePair f = repulsion_force(l.nodes[a], l.nodes[b], fm, rng);
            nf[a] += f.on_source;
            nf[b] += f.on_target;
        }

    const Point gc = drawing_center(l, st);
    const double cap = 100.0 * cooling;
    for (std::size_t c = 0; c < nc; ++c) {
        const auto& circle = st.circles[c];
        cf[c] += gravity_force(circle.center, gc, fm.gravity_strength);
        m.circle_shift[c] = capped(cf[c] * cooling, cap);
        // Angular step that moves an out-node along the track as far as its
        // tangential pull would move a free node, smoothed by the damping.
        const double inertia = circle.radius * circle.radius;
        spin[c] = 0.9 * spin[c] + 0.1 * cooling * torque[c] / std::max(inertia, 1.0);
        spin[c] = std::clamp(spin[c], -0.2, 0.2);
        m.circle_turn[c] = spin[c];
        // The residual pull keeps a circle that swings through a turning
        // point (spin near zero, still misaligned) from counting as settled.
        const double residual = cooling * std::abs(torque[c]) / std::max(circle.radius, 1.0);
        m.moved += m.circle_shift[c].norm() + std::abs(spin[c]) * circle.radius + residual;
    }
    for (Index u : st.unclustered) {
        if (l.nodes[u].pinned) continue;
        nf[u] += gravity_force(l.nodes[u].center(), gc, fm.gravity_strength);
        m.node_shift[u] = capped(nf[u] * cooling, cap);
        m.moved += m.node_shift[u].norm();
    }
    if (slide) {
        for (std::size_t c = 0; c < nc; ++c) {
            const auto& circle = st.circles[c];
            const std::size_t n = circle.members.size();
            if (n < 2) continue;
            const double limit = (kTwoPi / static_cast<double>(n)) * 0.25;
            for (std::size_t s = 0; s < n; ++s) {
                const Index v = circle.members[s];
                const double a = circle.rotation + circle.offsets[s];
                const Point tangent{-std::sin(a), std::cos(a)};
                const double ft = dot(tangential[v], tangent);
                m.slide[v] = std::clamp(cooling * ft / std::max(circle.radius, 1.0), -limit, limit);
                m.moved += std::abs(m.slide[v]) * circle.radius;
            }
        }
    }
    return m;
}

/// Applies sliding while keeping every member strictly between its
/// neighbours (at least a quarter of the even gap apart).
inline void apply_slide(CircleMeta& c, const std::vector<double>& slide) {
    const std::size_t n = c.members.size();
    if (n < 2) return;
    const double gap = kTwoPi / static_cast<double>(n);
    const double min_gap = 0.25 * gap;
    for (std::size_t s = 0; s < n; ++s) {
        const double prev = s == 0 ? c.offsets[n - 1] - kTwoPi : c.offsets[s - 1];
        const double next = s + 1 == n ? c.offsets[0] + kTwoPi : c.offsets[s + 1];
        double want = c.offsets[s] + slide[c.members[s]];
        const double lo = prev + min_gap;
        const double hi = next - min_gap;
        if (lo <= hi) want = std::clamp(want, lo, hi);
        else want = c.offsets[s];
        c.offsets[s] = want;
    }
}

inline void apply_rigid(LStructure& l, CiseState& st, const RigidMotion& m, bool slide) {
    for (std::size_t c = 0; c < st.circles.size(); ++c) {
        st.circles[c].center += m.circle_shift[c];
        st.circles[c].rotation = normalize_angle(st.circles[c].rotation + m.circle_turn[c]);
        if (slide) apply_slide(st.circles[c], m.slide);
    }
    for (Index u : st.unclustered) l.nodes[u].rect = l.nodes[u].rect.translated(m.node_shift[u].x, m.node_shift[u].y);
    place_all(l, st);
}

inline void check_flat(const LStructure& l, const char* algorithm) {
    if (!l.is_flat())
        throw LayoutError(std::string(algorithm) + " layout does not support compound nodes");
}

}  // namespace detail

/// Step 1: each cluster on its own evenly spaced circle, circles provisionally
/// in a row.
inline CiseState cise_step1(LStructure& l, const ClusterAssignment& clusters, const LayoutOptions& opts) {
    detail::check_flat(l, "cise");
    CiseState st;
    st.circle_of.assign(l.nodes.size(), std::nullopt);
    st.slot_of.assign(l.nodes.size(), 0);

    std::map<NodeId, Index> index;
    for (Index i = 0; i < l.nodes.size(); ++i) index[l.nodes[i].id] = i;
    std::map<std::string, std::vector<Index>> groups;
    for (const auto& [nid, cid] : clusters) {
        auto it = index.find(nid);
        if (it == index.end())
            throw LayoutError("cluster '" + cid + "' names node " + std::to_string(nid.value) + " which is not in the graph");
        groups[cid].push_back(it->second);
    }
    for (auto& [cid, members] : groups) std::sort(members.begin(), members.end());

    std::vector<std::optional<std::string>> cluster_of(l.nodes.size());
    for (const auto& [cid, members] : groups)
        for (Index v : members) cluster_of[v] = cid;
    for (Index i = 0; i < l.edges.size(); ++i) {
        const LEdge& e = l.edges[i];
        const bool intra = cluster_of[e.source] && cluster_of[e.target] && *cluster_of[e.source] == *cluster_of[e.target];
        (intra ? st.intra_edges : st.inter_edges).push_back(i);
    }
    for (Index v = 0; v < l.nodes.size(); ++v)
        if (!cluster_of[v]) st.unclustered.push_back(v);

    const double spacing = opts.get("nodeSeparation", 10.0);
    double cursor = 0.0;
    for (const auto& [cid, members] : groups) {
        std::vector<std::pair<Index, Index>> adj;
        for (Index ei : st.intra_edges) {
            const LEdge& e = l.edges[ei];
            if (*cluster_of[e.source] == cid) adj.emplace_back(e.source, e.target);
        }
        CircleMeta c;
        c.cluster_id = cid;
        c.members = circular_order<Index>(members, adj);
        std::vector<double> diagonals;
        for (Index v : c.members) diagonals.push_back(detail::node_diagonal(l.nodes[v]));
        c.radius = radius_for(diagonals, spacing);
        c.center = {cursor + c.radius, 0.0};
        cursor += 2.0 * c.radius + opts.ideal_edge_length;
        const std::size_t n = c.members.size();
        for (std::size_t k = 0; k < n; ++k) c.offsets.push_back(kTwoPi * static_cast<double>(k) / static_cast<double>(n));
        const std::size_t ci = st.circles.size();
        for (std::size_t k = 0; k < n; ++k) {
            st.circle_of[c.members[k]] = ci;
            st.slot_of[c.members[k]] = k;
        }
        detail::place_members(l, c);
        std::vector<Index> own;
        for (Index ei : st.intra_edges)
            if (*cluster_of[l.edges[ei].source] == cid) own.push_back(ei);
        const auto segs = edge_segments(l, own);
        c.intra_crossings = crossing_count(segs);
        st.circles.push_back(std::move(c));
    }
    return st;
}

/// Step 2: spring embedder on the cluster graph. Circles become round
/// meta-nodes sized by their diameter; parallel inter-cluster edges collapse
/// into one spring whose stiffness scales with the multiplicity.
inline LayoutReport cise_step2(LStructure& l, CiseState& st, const LayoutOptions& opts, LayoutContext& ctx) {
    LStructure q;
    std::vector<Index> q_of(l.nodes.size());
    for (auto& c : st.circles) {
        LNode disk = detail::circle_node(c);
        const Index qi = q.add_node(q.root(), Rect::centered_at({0.0, 0.0}, disk.rect.w, disk.rect.h));
        q.nodes[qi].round = true;
        for (Index v : c.members) q_of[v] = qi;
    }
    for (Index u : st.unclustered) {
        const Index qi = q.add_node(q.root(), l.nodes[u].rect, l.nodes[u].id);
        q.nodes[qi].pinned = l.nodes[u].pinned;
        q_of[u] = qi;
    }
    // Circles start stacked at the origin so the embedder scatters them.
    const double factor = opts.get("interClusterEdgeLengthFactor", 1.0);
    std::map<std::pair<Index, Index>, Index> merged;
    for (Index ei : st.inter_edges) {
        const LEdge& e = l.edges[ei];
        Index a = q_of[e.source];
        Index b = q_of[e.target];
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        auto it = merged.find({a, b});
        if (it != merged.end()) {
            q.edges[it->second].weight += 1.0;
            continue;
        }
        const bool touches_circle = st.circle_of[e.source] || st.circle_of[e.target];
        merged[{a, b}] = q.add_edge(a, b, opts.ideal_edge_length * (touches_circle ? factor : 1.0));
    }

    LayoutReport report = cose_run(q, opts, ctx, CoseSettings{force_model_from(opts), GravityCenter::BoundingBoxCenter});
    for (std::size_t c = 0; c < st.circles.size(); ++c) st.circles[c].center = q.nodes[c].center();
    for (Index u : st.unclustered) l.nodes[u].rect = q.nodes[q_of[u]].rect;
    detail::place_all(l, st);
    return report;
}

/// Step 3: circles move and rotate rigidly; members stay in their slots.
/// Ends by pushing unclustered nodes off any circle they overlap.
inline LayoutReport cise_step3(LStructure& l, CiseState& st, const LayoutOptions& opts, LayoutContext& ctx) {
    st.mobility = Mobility::Fixed;
    LayoutReport report;
    const ForceModel fm = force_model_from(opts);
    std::vector<double> spin(st.circles.size(), 0.0);
    const std::size_t movers = st.circles.size() + st.unclustered.size();
    for (int iter = 0; iter < opts.iterations; ++iter) {
        const double cooling =
            opts.cooling_initial * (1.0 - static_cast<double>(iter) / static_cast<double>(opts.iterations));
        const auto m = detail::rigid_motion(l, st, spin, fm, cooling, false, ctx.rng);
        detail::apply_rigid(l, st, m, false);
        report.iterations_used = iter + 1;
        report.final_total_displacement = m.moved;
        if (movers == 0 || m.moved / static_cast<double>(movers) < opts.convergence_eps) break;
    }
    detail::push_unclustered_off_circles(l, st);
    return report;
}

/// Step 4: members become flexible. Each iteration proposes rigid motion plus
/// sliding and keeps it only if neither the crossing count nor the number of
/// circle/unclustered overlaps grows; then adjacent swaps that strictly
/// reduce crossings are applied. Finally members are re-spaced evenly when
/// that costs no crossing.
inline LayoutReport cise_step4(LStructure& l, CiseState& st, const LayoutOptions& opts, LayoutContext& ctx,
                               CiseTrace* trace = nullptr) {
    st.mobility = Mobility::Flexible;
    LayoutReport report;
    const ForceModel fm = force_model_from(opts);
    std::vector<double> spin(st.circles.size(), 0.0);
    std::size_t crossings = crossing_count(l);
    std::size_t overlaps_now = detail::overlap_count(l, st);
    const std::size_t movers = st.circles.size() + l.nodes.size();
    int rejected_in_a_row = 0;

    auto swap_pass = [&]() {
        std::size_t accepted = 0;
        for (auto& c : st.circles) {
            const std::size_t n = c.members.size();
            if (n < 3) continue;
            for (std::size_t s = 0; s < n; ++s) {
                const std::size_t t = (s + 1) % n;
                const std::vector<Index> touched{c.members[s], c.members[t]};
                const std::size_t before = detail::incident_crossings(l, touched);
                std::swap(c.members[s], c.members[t]);
                detail::place_members(l, c);
                const std::size_t after = detail::incident_crossings(l, touched);
                if (after < before) {
                    st.slot_of[c.members[s]] = s;
                    st.slot_of[c.members[t]] = t;
                    crossings = crossings - before + after;
                    ++accepted;
                    if (trace) trace->step4_crossings.push_back(crossings);
                } else {
                    std::swap(c.members[s], c.members[t]);
                    detail::place_members(l, c);
                }
            }
        }
        return accepted;
    };

    for (int iter = 0; iter < opts.iterations; ++iter) {
        const double cooling =
            opts.cooling_initial * (1.0 - static_cast<double>(iter) / static_cast<double>(opts.iterations));
        const CiseState saved_state = st;
        const std::vector<LNode> saved_nodes = l.nodes;
        const auto m = detail::rigid_motion(l, st, spin, fm, cooling, true, ctx.rng);
        detail::apply_rigid(l, st, m, true);
        const std::size_t moved_crossings = crossing_count(l);
        const std::size_t moved_overlaps = detail::overlap_count(l, st);
        if (moved_crossings > crossings || moved_overlaps > overlaps_now) {
            st = saved_state;
            l.nodes = saved_nodes;
            std::fill(spin.begin(), spin.end(), 0.0);
            ++rejected_in_a_row;
        } else {
            crossings = moved_crossings;
            overlaps_now = moved_overlaps;
            rejected_in_a_row = 0;
            if (trace) trace->step4_crossings.push_back(crossings);
        }
        const std::size_t swaps = swap_pass();
        if (trace) trace->swaps_accepted += swaps;
        report.iterations_used = iter + 1;
        report.final_total_displacement = rejected_in_a_row ? 0.0 : m.moved;
        if (swaps > 0) continue;
        if (rejected_in_a_row >= 50 || m.moved / static_cast<double>(movers) < opts.convergence_eps) break;
    }

    // Even re-spacing in the current order, anchored at the circular mean of
    // the slots' deviations from the even grid.
    const CiseState saved_state = st;
    const std::vector<LNode> saved_nodes = l.nodes;
    for (auto& c : st.circles) {
        const std::size_t n = c.members.size();
        if (n < 2) continue;
        double sx = 0.0;
        double sy = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double dev = c.offsets[k] - kTwoPi * static_cast<double>(k) / static_cast<double>(n);
            sx += std::cos(dev);
            sy += std::sin(dev);
        }
        const double base = std::atan2(sy, sx);
        c.rotation = normalize_angle(c.rotation + base);
        for (std::size_t k = 0; k < n; ++k) c.offsets[k] = kTwoPi * static_cast<double>(k) / static_cast<double>(n);
    }
    detail::place_all(l, st);
    if (crossing_count(l) > crossings || detail::overlap_count(l, st) > overlaps_now) {
        st = saved_state;
        l.nodes = saved_nodes;
    } else {
        crossings = crossing_count(l);
        if (trace) trace->step4_crossings.push_back(crossings);
    }
    return report;
}

/// Runs steps 1-4. Without any clustered node this is the plain spring
/// embedder.
inline LayoutReport cise_run(LStructure& l, const ClusterAssignment& clusters, const LayoutOptions& opts,
                             LayoutContext& ctx, CiseTrace* trace = nullptr) {
    detail::check_flat(l, "cise");
    if (clusters.empty())
        return spring_embedder_run(l, opts, ctx, CoseSettings{force_model_from(opts), GravityCenter::Barycenter});

    for (auto& e : l.edges) e.ideal_length = opts.ideal_edge_length;
    LayoutReport total;
    CiseState st = cise_step1(l, clusters, opts);
    if (trace) trace->after_step1 = st.circles;
    const LayoutReport r2 = cise_step2(l, st, opts, ctx);
    if (trace) trace->after_step2 = st.circles;
    const LayoutReport r3 = cise_step3(l, st, opts, ctx);
    if (trace) {
        trace->after_step3 = st.circles;
        trace->crossings_after_step3 = crossing_count(l);
    }
    const LayoutReport r4 = cise_step4(l, st, opts, ctx, trace);
    if (trace) {
        trace->final_circles = st.circles;
        trace->final_crossings = crossing_count(l);
    }
    total.iterations_used = r2.iterations_used + r3.iterations_used + r4.iterations_used;
    total.final_total_displacement = r4.final_total_displacement;
    return total;
}

class CiseLayout : public LayoutAlgorithm {
public:
    std::string name() const override { return "cise"; }

    std::vector<OptionSpec> options() const override {
        auto o = common_options();
        o.push_back({"nodeSeparation", 10.0, "spacing between neighbours on a circle (px)"});
        o.push_back({"interClusterEdgeLengthFactor", 1.0, "rest-length multiplier for edges leaving a cluster"});
        o.push_back({"springConstant", 0.45, "spring stiffness"});
        o.push_back({"repulsionConstant", 4500.0, "repulsion constant (px^3/iteration)"});
        return o;
    }

    void check_model(const GraphModel& model) const override {
        for (const auto& [id, n] : model.nodes())
            if (n.child) throw LayoutError("cise layout does not support compound nodes");
    }

    LayoutReport run(LStructure& l, const LayoutOptions& opts, LayoutContext& ctx) override {
        return cise_run(l, clusters_of(l), opts, ctx);
    }
};

/// Whole graph on a single circle, through the CiSE code path.
class CircularLayout : public LayoutAlgorithm {
public:
    std::string name() const override { return "circular"; }

    std::vector<OptionSpec> options() const override { return CiseLayout{}.options(); }

    void check_model(const GraphModel& model) const override {
        for (const auto& [id, n] : model.nodes())
            if (n.child) throw LayoutError("circular layout does not support compound nodes");
    }

    LayoutReport run(LStructure& l, const LayoutOptions& opts, LayoutContext& ctx) override {
        ClusterAssignment all;
        for (const auto& n : l.nodes) all[n.id] = "";
        return cise_run(l, all, opts, ctx);
    }
};

}  // namespace chisio::layout
