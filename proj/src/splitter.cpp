#include "qlab/splitter.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace qlab {

int classify(const ComparisonWindow& window, double size) {
    if (size < 0.0) throw std::invalid_argument("classify: size must be >= 0");
    return static_cast<int>(window.count_greater(size));
}

int classify_refined(const ComparisonWindow& window, int m, int l, double size) {
    if (m < 0 || l < 1) throw std::invalid_argument("classify_refined: need m >= 0, l >= 1");
    if (size < 0.0) throw std::invalid_argument("classify_refined: size must be >= 0");
    if (window.capacity() != static_cast<std::size_t>(m) * static_cast<std::size_t>(l))
        throw std::invalid_argument("classify_refined: window capacity must be m*l");
    // size in [rank(k*l), rank((k-1)*l)) with g = #{entries > size} gives the
    // 1-based class floor(g/l)+1; entries the window does not hold yet count
    // as the 0-sentinel, which never exceeds a nonnegative size.
    const std::size_t g = window.count_greater(size);
    const int paper_class = static_cast<int>(g / static_cast<std::size_t>(l)) + 1;
    return paper_class - 1;
}

double error_rate(std::span<const double> inputs, std::span<const int> classes, int m, int l) {
    if (inputs.size() != classes.size())
        throw std::invalid_argument("error_rate: inputs/classes length mismatch");
    if (m < 0 || l < 1) throw std::invalid_argument("error_rate: need m >= 0, l >= 1");
    const std::size_t n = inputs.size();
    if (n == 0) return 0.0;

    std::vector<double> output;
    output.reserve(n);
    for (int c = 0; c <= m; ++c) {
        for (std::size_t i = 0; i < n; ++i) {
            if (classes[i] < 0 || classes[i] > m)
                throw std::invalid_argument("error_rate: class index out of range");
            if (classes[i] == c) output.push_back(inputs[i]);
        }
    }

    std::vector<double> reference(inputs.begin(), inputs.end());
    std::sort(reference.begin(), reference.end(), std::greater<double>());

    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (output[i] != reference[i]) ++mismatches;
    return static_cast<double>(mismatches) / static_cast<double>(n);
}

}  // namespace qlab
