// Worked-example fixtures with closed-form expected values.
//
//   "2.2"    3-cycle on the first three coordinates of C^4, its average P, the
//            reflection 2P - I and the failure of every pencil under sup.
//   "2.6"    the all-1/3 projection on C^3 with lambda = exp(2 pi i/3), the
//            orbit-max renorm and the non-isometric reflection.
//   "3.1.1"  averaging of two coordinates on C^3 under sup: group {1, -1}.
//   "3.1.2"  the "2.6" projection under the orbit-max norm: cube roots of 1.

#pragma once

#include "gbpkit/core.hpp"

#include <string>
#include <vector>

namespace gbpkit::repro {

inline constexpr double kFixtureTolerance = 1e-12;

struct Row {
    std::string quantity;
    std::string expected;
    std::string actual;
    double deviation = 0.0;  // max abs difference; 0 or 1 for discrete checks
    bool pass = false;
};

struct Report {
    std::string id;
    std::string description;
    std::vector<Row> rows;

    bool all_pass() const;
};

std::vector<std::string> fixture_ids();

/// Throws std::invalid_argument for an unknown id.
Report run_repro(const std::string& id, double tolerance = kFixtureTolerance);

/// Example operators shared with the tests and the CLI.
Operator example_three_average();     // P(x,y,z) = (x+y+z)/3 (1,1,1)
Operator example_three_cycle_tail();  // (x1,x2,x3,x4) -> (x2,x3,x1,x4)
Operator example_pair_average();      // ((x1+x2)/2, (x1+x2)/2, x3)

} // namespace gbpkit::repro
