#pragma once

#include <cassert>
#include <cstdint>
#include <vector>

#include "cch/types.hpp"

namespace cch {

// Addressable 4-heap keyed by Weight, indexed by vertex id. Supports
// insert-or-decrease, which is all Dijkstra needs.
class DaryHeap {
    static constexpr std::size_t ARITY = 4;

public:
    explicit DaryHeap(std::size_t num_vertices) : position_(num_vertices, NOT_IN_HEAP) {}

    bool empty() const { return slots_.empty(); }
    std::size_t size() const { return slots_.size(); }

    bool contains(Vertex v) const { return position_[v] != NOT_IN_HEAP; }
    Weight key(Vertex v) const { return slots_[position_[v]].key; }

    Vertex min_vertex() const { return slots_.front().vertex; }
    Weight min_key() const { return slots_.front().key; }

    void push_or_decrease(Vertex v, Weight key) {
        if (position_[v] == NOT_IN_HEAP) {
            position_[v] = static_cast<std::uint32_t>(slots_.size());
            slots_.push_back({key, v});
            sift_up(slots_.size() - 1);
        } else {
            assert(key <= slots_[position_[v]].key);
            slots_[position_[v]].key = key;
            sift_up(position_[v]);
        }
    }

    Vertex pop_min() {
        const Vertex top = slots_.front().vertex;
        position_[top] = NOT_IN_HEAP;
        if (slots_.size() > 1) {
            slots_.front() = slots_.back();
            slots_.pop_back();
            position_[slots_.front().vertex] = 0;
            sift_down(0);
        } else {
            slots_.pop_back();
        }
        return top;
    }

    // O(size) clear; the position array stays consistent for reuse.
    void clear() {
        for (const Slot& s : slots_) position_[s.vertex] = NOT_IN_HEAP;
        slots_.clear();
    }

private:
    static constexpr std::uint32_t NOT_IN_HEAP = std::numeric_limits<std::uint32_t>::max();

    struct Slot {
        Weight key;
        Vertex vertex;
    };

    void sift_up(std::size_t i) {
        const Slot moving = slots_[i];
        while (i > 0) {
            const std::size_t parent = (i - 1) / ARITY;
            if (slots_[parent].key <= moving.key) break;
            slots_[i] = slots_[parent];
            position_[slots_[i].vertex] = static_cast<std::uint32_t>(i);
            i = parent;
        }
        slots_[i] = moving;
        position_[moving.vertex] = static_cast<std::uint32_t>(i);
    }

    void sift_down(std::size_t i) {
        const Slot moving = slots_[i];
        while (true) {
            const std::size_t first_child = i * ARITY + 1;
            if (first_child >= slots_.size()) break;
            const std::size_t last_child = std::min(first_child + ARITY, slots_.size());
            std::size_t best = first_child;
            for (std::size_t c = first_child + 1; c < last_child; ++c)
                if (slots_[c].key < slots_[best].key) best = c;
            if (slots_[best].key >= moving.key) break;
            slots_[i] = slots_[best];
            position_[slots_[i].vertex] = static_cast<std::uint32_t>(i);
            i = best;
        }
        slots_[i] = moving;
        position_[moving.vertex] = static_cast<std::uint32_t>(i);
    }

    std::vector<Slot> slots_;
    std::vector<std::uint32_t> position_;
};

}  // namespace cch
