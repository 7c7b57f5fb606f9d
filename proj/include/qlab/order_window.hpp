#pragma once

#include <cstdint>
#include <deque>
#include <limits>
#include <vector>

namespace qlab {

// Order-maintaining multiset over doubles: O(log n) insert, erase-one and
// rank queries (treap with subtree counts). Priorities come from a private
// splitmix64 counter, so identical operation sequences build identical trees.
class OrderStatTree {
public:
    void insert(double key);
    void erase_one(double key);  // removes one instance; key must be present
    std::size_t size() const { return root_ < 0 ? 0 : nodes_[root_].cnt; }
    std::size_t count_greater(double key) const;
    // 1-based rank in descending order; rank must be in [1, size()].
    double kth_largest(std::size_t rank) const;
    void sorted_desc(std::vector<double>& out) const;

private:
    struct Node {
        double key;
        std::uint64_t prio;
        std::uint32_t cnt;
        std::int32_t left, right;
    };

    std::uint32_t count(std::int32_t t) const { return t < 0 ? 0u : nodes_[t].cnt; }
    void pull(std::int32_t t) {
        nodes_[t].cnt = 1 + count(nodes_[t].left) + count(nodes_[t].right);
    }
    std::int32_t new_node(double key);
    std::uint64_t next_prio();
    // split into (keys < key, keys >= key)
    void split(std::int32_t t, double key, std::int32_t& a, std::int32_t& b);
    std::int32_t merge(std::int32_t a, std::int32_t b);
    void collect_desc(std::int32_t t, std::vector<double>& out) const;

    std::vector<Node> nodes_;
    std::vector<std::int32_t> free_;
    std::int32_t root_ = -1;
    std::uint64_t prio_state_ = 0x9E3779B97F4A7C15ull;
};

// Sliding buffer of the last `capacity` job sizes plus an ordered view of the
// same values. Pushing at capacity evicts exactly the oldest entry.
class ComparisonWindow {
public:
    explicit ComparisonWindow(std::size_t capacity) : cap_(capacity) {}

    void push(double size) {
        if (cap_ == 0) return;
        if (fifo_.size() == cap_) {
            tree_.erase_one(fifo_.front());
            fifo_.pop_front();
        }
        fifo_.push_back(size);
        tree_.insert(size);
    }

    std::size_t size() const { return fifo_.size(); }
    std::size_t capacity() const { return cap_; }

    std::size_t count_greater(double size) const { return tree_.count_greater(size); }

    // Value at 1-based descending rank, with the sentinel convention
    // rank 0 -> +inf and rank > size() -> 0.
    double rank_value(std::size_t rank) const {
        if (rank == 0) return std::numeric_limits<double>::infinity();
        if (rank > tree_.size()) return 0.0;
        return tree_.kth_largest(rank);
    }

    std::vector<double> sorted_desc() const {
        std::vector<double> out;
        out.reserve(fifo_.size());
        tree_.sorted_desc(out);
        return out;
    }

    const std::deque<double>& fifo() const { return fifo_; }

private:
    std::size_t cap_;
    std::deque<double> fifo_;
    OrderStatTree tree_;
};

}  // namespace qlab
