#include "sanlr/dimension_tree.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <sstream>
#include <utility>

#include "sanlr/error.hpp"

namespace sanlr {

std::size_t DimensionTree::depth(std::size_t id) const {
    std::size_t level = 0;
    for (int p = vertex(id).parent; p >= 0; p = vertices_[static_cast<std::size_t>(p)].parent)
        ++level;
    return level;
}

std::string DimensionTree::mode_label(std::size_t id) const {
    std::ostringstream os;
    os << '{';
    const auto& modes = vertex(id).modes;
    for (std::size_t i = 0; i < modes.size(); ++i) {
        if (i) os << ',';
        os << modes[i] + 1;
    }
    os << '}';
    return os.str();
}

bool DimensionTree::operator==(const DimensionTree& other) const {
    if (vertices_.size() != other.vertices_.size() || leaf_order_ != other.leaf_order_)
        return false;
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        const auto& a = vertices_[i];
        const auto& b = other.vertices_[i];
        if (a.modes != b.modes || a.parent != b.parent || a.left != b.left || a.right != b.right)
            return false;
    }
    return true;
}

DimensionTree canonical_tree(std::size_t d, std::span<const std::size_t> leaf_order) {
    if (d == 0)
        fail(ErrorCode::InvalidPermutation, "dimension tree needs d >= 1");
    if (leaf_order.size() != d)
        fail(ErrorCode::InvalidPermutation, "leaf order has wrong length");
    std::vector<bool> seen(d, false);
    for (auto m : leaf_order) {
        if (m >= d || seen[m])
            fail(ErrorCode::InvalidPermutation, "leaf order is not a permutation of the modes");
        seen[m] = true;
    }

    DimensionTree tree;
    tree.leaf_order_.assign(leaf_order.begin(), leaf_order.end());
    tree.leaf_of_mode_.assign(d, 0);

    // breadth-first construction over contiguous ranges of the leaf order
    struct Pending {
        std::size_t first, count;
        int parent;
        bool is_left;
    };
    std::deque<Pending> queue{{0, d, -1, false}};
    while (!queue.empty()) {
        auto job = queue.front();
        queue.pop_front();

        const auto id = tree.vertices_.size();
        TreeVertex v;
        v.parent = job.parent;
        v.modes.assign(leaf_order.begin() + static_cast<std::ptrdiff_t>(job.first),
                       leaf_order.begin() + static_cast<std::ptrdiff_t>(job.first + job.count));
        std::sort(v.modes.begin(), v.modes.end());
        tree.vertices_.push_back(std::move(v));

        if (job.parent >= 0) {
            auto& p = tree.vertices_[static_cast<std::size_t>(job.parent)];
            (job.is_left ? p.left : p.right) = static_cast<int>(id);
        }
        if (job.count == 1) {
            tree.leaf_of_mode_[leaf_order[job.first]] = id;
        } else {
            const auto left = (job.count + 1) / 2;
            queue.push_back({job.first, left, static_cast<int>(id), true});
            queue.push_back({job.first + left, job.count - left, static_cast<int>(id), false});
        }
    }
    return tree;
}

DimensionTree canonical_tree(std::size_t d) {
    std::vector<std::size_t> order(d);
    std::iota(order.begin(), order.end(), std::size_t{0});
    return canonical_tree(d, order);
}

DimensionTree parse_tree_spec(const std::string& spec, std::size_t d) {
    if (spec.empty() || spec == "canonical")
        return canonical_tree(d);
    constexpr std::string_view prefix = "perm:";
    if (spec.rfind(prefix, 0) != 0)
        fail(ErrorCode::InvalidPermutation, "tree must be 'canonical' or 'perm:<list>', got '" + spec + "'");

    std::vector<std::size_t> order;
    std::istringstream in(spec.substr(prefix.size()));
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            std::size_t pos = 0;
            const long v = std::stol(item, &pos);
            if (pos != item.size() || v < 1)
                throw std::invalid_argument(item);
            order.push_back(static_cast<std::size_t>(v - 1));
        } catch (const std::exception&) {
            fail(ErrorCode::InvalidPermutation, "bad leaf index '" + item + "' in tree spec");
        }
    }
    return canonical_tree(d, order);
}

}  // namespace sanlr
