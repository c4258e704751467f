#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace locstat {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

class config_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class numerical_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace locstat
