#pragma once

#include <cstddef>
#include <string>

#include "relucalc/errors.hpp"
#include "relucalc/network.hpp"

namespace relucalc {

/// Pairs a construction's measured metrics with the bounds it must satisfy.
/// Size and width claims are upper bounds; the depth claim is an equality.
struct BoundCertificate {
    std::size_t claimed_size_bound = 0;
    std::size_t claimed_width_bound = 0;
    std::size_t claimed_depth_value = 0;
    NetworkMetrics actual;
};

/// Checks the claims against the network at construction time. A violation
/// means the construction itself is wrong.
inline BoundCertificate certify(const ReluNetwork& net, std::size_t size_bound,
                                std::size_t width_bound, std::size_t depth_value,
                                const char* what) {
    BoundCertificate c{size_bound, width_bound, depth_value, metrics(net)};
    if (c.actual.size > size_bound)
        throw InternalError(std::string(what) + ": size " + std::to_string(c.actual.size) +
                            " exceeds certified bound " + std::to_string(size_bound));
    if (c.actual.width > width_bound)
        throw InternalError(std::string(what) + ": width " + std::to_string(c.actual.width) +
                            " exceeds certified bound " + std::to_string(width_bound));
    if (c.actual.depth != depth_value)
        throw InternalError(std::string(what) + ": depth " + std::to_string(c.actual.depth) +
                            " differs from certified value " + std::to_string(depth_value));
    return c;
}

struct CertifiedNet {
    ReluNetwork net;
    BoundCertificate cert;
};

/// Smallest k with 2^k >= n; 0 for n <= 1.
inline std::size_t ceil_log2(std::size_t n) {
    std::size_t k = 0, p = 1;
    while (p < n) {
        p *= 2;
        ++k;
    }
    return k;
}

} // namespace relucalc
