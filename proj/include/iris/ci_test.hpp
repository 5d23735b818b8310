#pragma once

#include <string>
#include <vector>

#include "iris/table.hpp"

namespace iris {

struct CITestResult {
    std::string x, y;
    std::vector<std::string> conditioning_set;
    double statistic = 0.0;
    int degrees_of_freedom = 1;
    double p_value = 1.0;
    bool independent = true;
    bool low_power = false;   // some stratum had fewer than 5 rows
    bool degenerate = false;  // a variable had a single observed level
};

// Chi-squared upper tail P(X >= x) with k degrees of freedom.
double chi_squared_upper_tail(double x, int k);

// G-test (likelihood ratio) of x ⊥ y | Z over the table's complete rows for
// {x,y} ∪ Z, summed across strata of Z.
CITestResult ci_test(const ObservationTable& table, const std::string& x, const std::string& y,
                     const std::vector<std::string>& conditioning_set, double significance);

}  // namespace iris
