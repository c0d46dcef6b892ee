#include "locreg/neighbor_index.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "locreg/simd/kernels.hpp"

namespace locreg {

namespace {

// Better-neighbor order: nearer first, ties by smaller row id.
inline bool better(const double d2_a, const std::size_t id_a, const double d2_b,
                   const std::size_t id_b) {
    return d2_a < d2_b || (d2_a == d2_b && id_a < id_b);
}

}  // namespace

NeighborIndex NeighborIndex::build(const PointSet& points) {
    points.validate();
    NeighborIndex index;
    index.points_ = points;
    index.col_ptrs_ = index.points_.col_ptrs();
    index.order_.resize(points.n);
    std::iota(index.order_.begin(), index.order_.end(), std::size_t{0});
    index.nodes_.reserve(2 * points.n / kLeafSize + 2);
    index.root_ = index.build_node(0, points.n);
    return index;
}

std::int32_t NeighborIndex::build_node(std::size_t begin, std::size_t end) {
    Node node;
    node.begin = begin;
    node.end = end;
    node.box_min.assign(points_.dim, 0.0);
    node.box_max.assign(points_.dim, 0.0);
    for (std::size_t a = 0; a < points_.dim; ++a) {
        double lo = points_.cols[a][order_[begin]];
        double hi = lo;
        for (std::size_t t = begin + 1; t < end; ++t) {
            const double v = points_.cols[a][order_[t]];
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        node.box_min[a] = lo;
        node.box_max[a] = hi;
    }

    if (end - begin <= kLeafSize) {
        const std::int32_t id = static_cast<std::int32_t>(nodes_.size());
        nodes_.push_back(std::move(node));
        return id;
    }

    // Split the widest axis at the median; (value, id) ordering keeps builds
    // reproducible when coordinates tie.
    std::size_t axis = 0;
    double width = node.box_max[0] - node.box_min[0];
    for (std::size_t a = 1; a < points_.dim; ++a) {
        const double w = node.box_max[a] - node.box_min[a];
        if (w > width) {
            width = w;
            axis = a;
        }
    }
    if (width <= 0.0) {
        // All points identical in every coordinate: keep as one leaf.
        const std::int32_t id = static_cast<std::int32_t>(nodes_.size());
        nodes_.push_back(std::move(node));
        return id;
    }

    const std::size_t mid = begin + (end - begin) / 2;
    const double* coords = points_.cols[axis].data();
    std::nth_element(order_.begin() + begin, order_.begin() + mid,
                     order_.begin() + end, [coords](std::size_t i, std::size_t j) {
                         return coords[i] < coords[j] || (coords[i] == coords[j] && i < j);
                     });
    node.axis = static_cast<int>(axis);
    node.split = coords[order_[mid]];

    const std::int32_t id = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back(std::move(node));
    const std::int32_t left = build_node(begin, mid);
    const std::int32_t right = build_node(mid, end);
    nodes_[id].left = left;
    nodes_[id].right = right;
    return id;
}

double NeighborIndex::box_dist2(const Node& node, const double* query) const {
    // Accumulated like point_dist2, so box_dist2 <= point_dist2 holds in
    // floating point for every point inside the box.
    double d = 0.0;
    if (query[0] < node.box_min[0])
        d = node.box_min[0] - query[0];
    else if (query[0] > node.box_max[0])
        d = query[0] - node.box_max[0];
    double acc = d * d;
    for (std::size_t a = 1; a < points_.dim; ++a) {
        d = 0.0;
        if (query[a] < node.box_min[a])
            d = node.box_min[a] - query[a];
        else if (query[a] > node.box_max[a])
            d = query[a] - node.box_max[a];
        acc = std::fma(d, d, acc);
    }
    return acc;
}

void NeighborIndex::knn_recurse(std::int32_t node_id, const double* query,
                                std::optional<std::size_t> exclude, std::size_t k,
                                std::vector<HeapEntry>& heap) const {
    const Node& node = nodes_[static_cast<std::size_t>(node_id)];
    if (heap.size() == k && box_dist2(node, query) > heap.front().d2) return;

    const auto heap_cmp = [](const HeapEntry& a, const HeapEntry& b) {
        return better(a.d2, a.id, b.d2, b.id);  // worst entry at the top
    };

    if (node.is_leaf()) {
        const std::size_t excluded = exclude.value_or(points_.n);
        for (std::size_t t = node.begin; t < node.end; ++t) {
            const std::size_t id = order_[t];
            if (id == excluded) continue;
            const double d2 =
                simd::point_dist2(col_ptrs_.data(), points_.dim, id, query);
            if (heap.size() < k) {
                heap.push_back({d2, id});
                std::push_heap(heap.begin(), heap.end(), heap_cmp);
            } else if (better(d2, id, heap.front().d2, heap.front().id)) {
                std::pop_heap(heap.begin(), heap.end(), heap_cmp);
                heap.back() = {d2, id};
                std::push_heap(heap.begin(), heap.end(), heap_cmp);
            }
        }
        return;
    }

    const bool left_first = query[node.axis] < node.split;
    const std::int32_t first = left_first ? node.left : node.right;
    const std::int32_t second = left_first ? node.right : node.left;
    knn_recurse(first, query, exclude, k, heap);
    knn_recurse(second, query, exclude, k, heap);
}

std::vector<Neighbor> NeighborIndex::knn(std::span<const double> query, std::size_t k,
                                         std::optional<std::size_t> exclude) const {
    if (query.size() != points_.dim)
        raise(ErrorCode::DimensionMismatch,
              "query has dimension " + std::to_string(query.size()) + ", index has " +
                  std::to_string(points_.dim));
    if (exclude && *exclude >= points_.n)
        raise(ErrorCode::InvalidArgument,
              "excluded id " + std::to_string(*exclude) + " is out of range");
    const std::size_t available = points_.n - (exclude ? 1 : 0);
    if (k < 1 || k > available)
        raise(ErrorCode::KTooLarge, "k=" + std::to_string(k) + " with " +
                                        std::to_string(available) +
                                        " available points");

    std::vector<HeapEntry> heap;
    heap.reserve(k);
    knn_recurse(root_, query.data(), exclude, k, heap);

    std::sort(heap.begin(), heap.end(), [](const HeapEntry& a, const HeapEntry& b) {
        return better(a.d2, a.id, b.d2, b.id);
    });
    std::vector<Neighbor> result(heap.size());
    for (std::size_t i = 0; i < heap.size(); ++i)
        result[i] = {heap[i].id, std::sqrt(heap[i].d2)};
    return result;
}

void NeighborIndex::radius_recurse(std::int32_t node_id, const double* query,
                                   double r2, std::vector<std::size_t>& out) const {
    const Node& node = nodes_[static_cast<std::size_t>(node_id)];
    if (box_dist2(node, query) > r2) return;
    if (node.is_leaf()) {
        for (std::size_t t = node.begin; t < node.end; ++t) {
            const std::size_t id = order_[t];
            if (simd::point_dist2(col_ptrs_.data(), points_.dim, id, query) <= r2)
                out.push_back(id);
        }
        return;
    }
    radius_recurse(node.left, query, r2, out);
    radius_recurse(node.right, query, r2, out);
}

std::vector<std::size_t> NeighborIndex::radius_query(std::span<const double> query,
                                                     double radius) const {
    if (query.size() != points_.dim)
        raise(ErrorCode::DimensionMismatch,
              "query has dimension " + std::to_string(query.size()) + ", index has " +
                  std::to_string(points_.dim));
    if (!(radius > 0.0) || !std::isfinite(radius))
        raise(ErrorCode::InvalidArgument, "radius must be positive and finite");
    std::vector<std::size_t> out;
    radius_recurse(root_, query.data(), radius * radius, out);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace locreg
