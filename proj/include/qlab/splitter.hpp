#pragma once

#include <span>

#include "qlab/order_window.hpp"

namespace qlab {

enum class WindowInit {
    Zeros,    // window pre-filled with zeros
    Prefill,  // window pre-filled with i.i.d. draws from the job-size law
};

struct SplitterParams {
    int m = 0;  // number of comparison jobs; m+1 classes
    int l = 1;  // history multiplier; window holds m*l sizes
    WindowInit init = WindowInit::Zeros;
};

// Basic comparison splitting: the arriving job goes to class
// k = #{window entries strictly greater than size}, k in {0..m}.
// Class 0 holds the largest jobs, class m the smallest. Ties count as
// "not greater", which is the half-open-interval rule with sentinels
// (rank 0 -> +inf, rank m+1 -> 0). The window must have capacity m.
int classify(const ComparisonWindow& window, double size);

// Refined (m,l) splitting: thresholds at descending ranks l, 2l, ..., ml of
// the m*l-entry window. Computes the 1-based class in {1..m+1} from the rule
// size in [rank(k*l), rank((k-1)*l)) and returns it normalized to k-1 in
// {0..m} so both splitters share one downstream convention. For l = 1 this
// equals classify().
int classify_refined(const ComparisonWindow& window, int m, int l, double size);

// Fraction of positions where the splitter's class-concatenated output
// disagrees with the input sorted in descending order. The output sequence
// concatenates classes in increasing class index (largest-job class first),
// each class in arrival order. `classes` must be classify_refined output
// (normalized, in {0..m}) for `inputs`, same length.
double error_rate(std::span<const double> inputs, std::span<const int> classes, int m, int l);

}  // namespace qlab
