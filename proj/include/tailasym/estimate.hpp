#ifndef TAILASYM_ESTIMATE_HPP
#define TAILASYM_ESTIMATE_HPP

#include <string>
#include <vector>

namespace tailasym {

enum class Order { First, Second };

/// Value of a tail-probability expansion together with its per-term
/// breakdown, so the retained correction terms stay inspectable.
struct AsymptoticEstimate {
    double first_order = 0.0;
    double second_order_correction = 0.0;
    Order order = Order::Second;
    std::vector<std::pair<std::string, double>> terms;
    /// Combined standard error of any Monte Carlo weight expectations that
    /// entered the evaluation (0 when everything went through quadrature).
    double mc_stderr = 0.0;
    std::vector<std::string> warnings;

    double value() const {
        return order == Order::Second ? first_order + second_order_correction
                                      : first_order;
    }
};

}  // namespace tailasym

#endif
