#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace mlg {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;

// Error categories double as CLI exit codes.
enum class ErrorKind { Parse = 1, Data = 2, Precondition = 3, Integration = 4 };

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string &what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

inline Error parse_error(const std::string &m) { return Error(ErrorKind::Parse, m); }
inline Error data_error(const std::string &m) { return Error(ErrorKind::Data, m); }
inline Error math_error(const std::string &m) { return Error(ErrorKind::Precondition, m); }
inline Error integration_error(const std::string &m) { return Error(ErrorKind::Integration, m); }

} // namespace mlg
