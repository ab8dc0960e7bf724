#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace sanlr {

struct TreeVertex {
    std::vector<std::size_t> modes;  // ascending, 0-based
    int parent = -1;
    int left = -1;
    int right = -1;

    bool is_leaf() const noexcept { return left < 0; }
    std::size_t leaf_mode() const { return modes.front(); }
};

//
// Full binary dimension tree over modes {0..d-1}.
//
// Vertex ids are assigned level by level starting at the root (id 0), so a
// parent always has a smaller id than its children. Iterating ids in
// descending order visits children before parents.
//
class DimensionTree {
public:
    static constexpr std::size_t root = 0;

    DimensionTree() = default;

    std::size_t dimension() const noexcept { return leaf_order_.size(); }
    std::size_t size() const noexcept { return vertices_.size(); }
    const TreeVertex& vertex(std::size_t id) const { return vertices_.at(id); }
    const std::vector<TreeVertex>& vertices() const noexcept { return vertices_; }
    const std::vector<std::size_t>& leaf_order() const noexcept { return leaf_order_; }

    std::size_t leaf_of_mode(std::size_t mode) const { return leaf_of_mode_.at(mode); }
    std::size_t depth(std::size_t id) const;

    // "{1,2,3}" style label with 1-based modes.
    std::string mode_label(std::size_t id) const;

    bool operator==(const DimensionTree& other) const;

    friend DimensionTree canonical_tree(std::size_t d, std::span<const std::size_t> leaf_order);

private:
    std::vector<TreeVertex> vertices_;
    std::vector<std::size_t> leaf_order_;
    std::vector<std::size_t> leaf_of_mode_;
};

// Balanced tree: a vertex holding k leaves (in `leaf_order` sequence) gives
// the first ceil(k/2) to its left child and the rest to its right child.
// `leaf_order` is a 0-based permutation of {0..d-1}.
DimensionTree canonical_tree(std::size_t d, std::span<const std::size_t> leaf_order);
DimensionTree canonical_tree(std::size_t d);

// Parses "canonical" or "perm:1,5,2,6,..." (1-based) into a tree over d modes.
DimensionTree parse_tree_spec(const std::string& spec, std::size_t d);

}  // namespace sanlr
