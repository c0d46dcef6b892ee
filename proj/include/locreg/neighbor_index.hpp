#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "locreg/point_set.hpp"

namespace locreg {

struct Neighbor {
    std::size_t id;
    double distance;
};

/// Exact kd-tree over a PointSet. Immutable after build; concurrent queries
/// are safe. Results match an exhaustive scan exactly, with distance ties
/// broken by ascending row id.
class NeighborIndex {
public:
    static NeighborIndex build(const PointSet& points);

    std::size_t size() const { return points_.n; }
    std::size_t dim() const { return points_.dim; }
    const PointSet& points() const { return points_; }

    /// k nearest neighbors of query, ascending by (distance, id). A point
    /// equal to the query is returned at distance 0 unless its id is passed
    /// as `exclude`.
    std::vector<Neighbor> knn(std::span<const double> query, std::size_t k,
                              std::optional<std::size_t> exclude = std::nullopt) const;

    /// Row ids within the closed ball of radius r (squared-distance test
    /// d2 <= r*r), ascending by id.
    std::vector<std::size_t> radius_query(std::span<const double> query,
                                          double radius) const;

private:
    struct Node {
        // leaf: [begin, end) into order_; internal: split axis/value, children
        std::size_t begin = 0, end = 0;
        int axis = -1;
        double split = 0.0;
        std::int32_t left = -1, right = -1;
        std::vector<double> box_min, box_max;
        bool is_leaf() const { return axis < 0; }
    };

    struct HeapEntry {
        double d2;
        std::size_t id;
    };

    NeighborIndex() = default;

    std::int32_t build_node(std::size_t begin, std::size_t end);
    double box_dist2(const Node& node, const double* query) const;
    void knn_recurse(std::int32_t node_id, const double* query,
                     std::optional<std::size_t> exclude, std::size_t k,
                     std::vector<HeapEntry>& heap) const;
    void radius_recurse(std::int32_t node_id, const double* query, double r2,
                        std::vector<std::size_t>& out) const;

    PointSet points_;
    std::vector<const double*> col_ptrs_;
    std::vector<Node> nodes_;
    std::vector<std::size_t> order_;
    std::int32_t root_ = -1;

    static constexpr std::size_t kLeafSize = 16;
};

}  // namespace locreg
