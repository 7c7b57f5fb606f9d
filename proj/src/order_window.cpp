#include "qlab/order_window.hpp"

#include <stdexcept>

namespace qlab {

std::uint64_t OrderStatTree::next_prio() {
    // splitmix64
    std::uint64_t z = (prio_state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::int32_t OrderStatTree::new_node(double key) {
    std::int32_t idx;
    if (!free_.empty()) {
        idx = free_.back();
        free_.pop_back();
    } else {
        idx = static_cast<std::int32_t>(nodes_.size());
        nodes_.emplace_back();
    }
    nodes_[idx] = Node{key, next_prio(), 1, -1, -1};
    return idx;
}

void OrderStatTree::split(std::int32_t t, double key, std::int32_t& a, std::int32_t& b) {
    if (t < 0) {
        a = b = -1;
        return;
    }
    if (nodes_[t].key < key) {
        split(nodes_[t].right, key, nodes_[t].right, b);
        a = t;
    } else {
        split(nodes_[t].left, key, a, nodes_[t].left);
        b = t;
    }
    pull(t);
}

std::int32_t OrderStatTree::merge(std::int32_t a, std::int32_t b) {
    if (a < 0) return b;
    if (b < 0) return a;
    if (nodes_[a].prio > nodes_[b].prio) {
        nodes_[a].right = merge(nodes_[a].right, b);
        pull(a);
        return a;
    }
    nodes_[b].left = merge(a, nodes_[b].left);
    pull(b);
    return b;
}

void OrderStatTree::insert(double key) {
    std::int32_t a, b;
    split(root_, key, a, b);
    root_ = merge(merge(a, new_node(key)), b);
}

void OrderStatTree::erase_one(double key) {
    std::int32_t a, bc;
    split(root_, key, a, bc);  // a: keys < key; bc: keys >= key
    if (bc < 0 || nodes_[bc].key != key) {
        // No node >= key exists, or the smallest such node differs from key.
        std::int32_t probe = bc;
        while (probe >= 0 && nodes_[probe].left >= 0) probe = nodes_[probe].left;
        if (probe < 0 || nodes_[probe].key != key) {
            root_ = merge(a, bc);
            throw std::logic_error("OrderStatTree::erase_one: key not present");
        }
    }
    // Split off the equal-key block's first element by rank: take the
    // leftmost node of bc (smallest >= key, hence == key) and drop it.
    std::int32_t t = bc;
    std::vector<std::int32_t> path;
    while (nodes_[t].left >= 0) {
        path.push_back(t);
        t = nodes_[t].left;
    }
    if (nodes_[t].key != key) {
        root_ = merge(a, bc);
        throw std::logic_error("OrderStatTree::erase_one: key not present");
    }
    const std::int32_t replacement = merge(nodes_[t].left, nodes_[t].right);
    if (path.empty()) {
        bc = replacement;
    } else {
        nodes_[path.back()].left = replacement;
        for (auto it = path.rbegin(); it != path.rend(); ++it) pull(*it);
    }
    free_.push_back(t);
    root_ = merge(a, bc);
}

std::size_t OrderStatTree::count_greater(double key) const {
    std::size_t n = 0;
    std::int32_t t = root_;
    while (t >= 0) {
        if (nodes_[t].key > key) {
            n += 1 + count(nodes_[t].right);
            t = nodes_[t].left;
        } else {
            t = nodes_[t].right;
        }
    }
    return n;
}

double OrderStatTree::kth_largest(std::size_t rank) const {
    if (rank == 0 || rank > size()) throw std::out_of_range("OrderStatTree::kth_largest");
    std::int32_t t = root_;
    while (true) {
        const std::size_t right_cnt = count(nodes_[t].right);
        if (rank <= right_cnt) {
            t = nodes_[t].right;
        } else if (rank == right_cnt + 1) {
            return nodes_[t].key;
        } else {
            rank -= right_cnt + 1;
            t = nodes_[t].left;
        }
    }
}

void OrderStatTree::collect_desc(std::int32_t t, std::vector<double>& out) const {
    if (t < 0) return;
    collect_desc(nodes_[t].right, out);
    out.push_back(nodes_[t].key);
    collect_desc(nodes_[t].left, out);
}

void OrderStatTree::sorted_desc(std::vector<double>& out) const { collect_desc(root_, out); }

}  // namespace qlab
