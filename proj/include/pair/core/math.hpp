#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <utility>

namespace pair {

/// Minimal fixed-size 3-vector, templated on the scalar so the same
/// kinematics code runs on plain doubles and on tape variables.
template <typename T>
struct Vec3 {
  T x{}, y{}, z{};

  Vec3() = default;
  Vec3(T x_, T y_, T z_) : x(std::move(x_)), y(std::move(y_)), z(std::move(z_)) {}

  T& operator[](std::size_t i) { return i == 0 ? x : (i == 1 ? y : z); }
  const T& operator[](std::size_t i) const { return i == 0 ? x : (i == 1 ? y : z); }

  friend Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator*(const Vec3& a, const T& s) { return {a.x * s, a.y * s, a.z * s}; }
  friend Vec3 operator*(const T& s, const Vec3& a) { return {a.x * s, a.y * s, a.z * s}; }
  Vec3& operator+=(const Vec3& b) {
    x = x + b.x;
    y = y + b.y;
    z = z + b.z;
    return *this;
  }
};

using Vec3d = Vec3<double>;

template <typename T>
T dot(const Vec3<T>& a, const Vec3<T>& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

template <typename T>
Vec3<T> cross(const Vec3<T>& a, const Vec3<T>& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

template <typename T>
T squared_norm(const Vec3<T>& a) {
  return dot(a, a);
}

inline double norm(const Vec3d& a) { return std::sqrt(squared_norm(a)); }

inline double distance(const Vec3d& a, const Vec3d& b) { return norm(a - b); }

/// Row-major 3x3 matrix.
template <typename T>
struct Mat3 {
  std::array<T, 9> m{};

  static Mat3 identity() {
    Mat3 r;
    r.m = {T(1.0), T(0.0), T(0.0), T(0.0), T(1.0), T(0.0), T(0.0), T(0.0), T(1.0)};
    return r;
  }

  T& operator()(int r, int c) { return m[static_cast<std::size_t>(3 * r + c)]; }
  const T& operator()(int r, int c) const { return m[static_cast<std::size_t>(3 * r + c)]; }

  friend Mat3 operator*(const Mat3& a, const Mat3& b) {
    Mat3 r;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j) + a(i, 2) * b(2, j);
      }
    }
    return r;
  }

  friend Vec3<T> operator*(const Mat3& a, const Vec3<T>& v) {
    return {a(0, 0) * v.x + a(0, 1) * v.y + a(0, 2) * v.z,
            a(1, 0) * v.x + a(1, 1) * v.y + a(1, 2) * v.z,
            a(2, 0) * v.x + a(2, 1) * v.y + a(2, 2) * v.z};
  }
};

using Mat3d = Mat3<double>;

/// Unit quaternion, (w, x, y, z) order.
struct Quat {
  double w = 1.0, x = 0.0, y = 0.0, z = 0.0;

  static Quat identity() { return {}; }

  double norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

  Quat normalized() const {
    const double n = norm();
    return {w / n, x / n, y / n, z / n};
  }

  static Quat from_axis_angle(const Vec3d& axis, double angle) {
    const double n = pair::norm(axis);
    const double s = std::sin(0.5 * angle) / n;
    return {std::cos(0.5 * angle), axis.x * s, axis.y * s, axis.z * s};
  }

  friend Quat operator*(const Quat& a, const Quat& b) {
    return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
  }
};

/// Rotation matrix of a quaternion given as raw components. The input does
/// not need unit norm: it is normalized inside, so gradients taken through
/// this function see the projection onto the unit sphere.
template <typename T>
Mat3<T> rotation_from_quat(const T& qw, const T& qx, const T& qy, const T& qz) {
  const T s = qw * qw + qx * qx + qy * qy + qz * qz;
  const T two_over = T(2.0) / s;
  Mat3<T> r;
  r(0, 0) = T(1.0) - two_over * (qy * qy + qz * qz);
  r(0, 1) = two_over * (qx * qy - qw * qz);
  r(0, 2) = two_over * (qx * qz + qw * qy);
  r(1, 0) = two_over * (qx * qy + qw * qz);
  r(1, 1) = T(1.0) - two_over * (qx * qx + qz * qz);
  r(1, 2) = two_over * (qy * qz - qw * qx);
  r(2, 0) = two_over * (qx * qz - qw * qy);
  r(2, 1) = two_over * (qy * qz + qw * qx);
  r(2, 2) = T(1.0) - two_over * (qx * qx + qy * qy);
  return r;
}

inline Mat3d rotation_from_quat(const Quat& q) { return rotation_from_quat<double>(q.w, q.x, q.y, q.z); }

/// sin(sqrt(s)) / sqrt(s), smooth at s = 0.
inline double sinc_of_squared(double s) {
  if (s < 1e-3) {
    return 1.0 - s / 6.0 + s * s / 120.0 - s * s * s / 5040.0;
  }
  const double t = std::sqrt(s);
  return std::sin(t) / t;
}

inline double sinc_of_squared_derivative(double s) {
  if (s < 1e-3) {
    return -1.0 / 6.0 + s / 60.0 - s * s / 1680.0 + s * s * s / 90720.0;
  }
  const double t = std::sqrt(s);
  return (std::cos(t) - std::sin(t) / t) / (2.0 * s);
}

/// (1 - cos(sqrt(s))) / s, smooth at s = 0.
inline double cosc_of_squared(double s) {
  if (s < 1e-3) {
    return 0.5 - s / 24.0 + s * s / 720.0 - s * s * s / 40320.0;
  }
  return (1.0 - std::cos(std::sqrt(s))) / s;
}

inline double cosc_of_squared_derivative(double s) {
  if (s < 1e-3) {
    return -1.0 / 24.0 + s / 360.0 - s * s / 13440.0 + s * s * s / 907200.0;
  }
  return (sinc_of_squared(s) - 2.0 * cosc_of_squared(s)) / (2.0 * s);
}

/// Rotation about a coordinate axis (0 = x, 1 = y, 2 = z).
inline Mat3d axis_rotation(int axis, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  Mat3d r = Mat3d::identity();
  const int i = (axis + 1) % 3;
  const int j = (axis + 2) % 3;
  r(i, i) = c;
  r(i, j) = -s;
  r(j, i) = s;
  r(j, j) = c;
  return r;
}

/// Logarithm of a rotation matrix as an axis-angle vector (angle in [0, pi]).
inline Vec3d axis_angle_from_rotation(const Mat3d& r) {
  const double cos_angle = std::clamp((r(0, 0) + r(1, 1) + r(2, 2) - 1.0) / 2.0, -1.0, 1.0);
  const double angle = std::acos(cos_angle);
  const Vec3d v{r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1)};
  if (angle < 1e-8) {
    return v * 0.5;
  }
  if (std::numbers::pi - angle < 1e-6) {
    // Near pi: axis from the diagonal of (R + I) / 2.
    int k = 0;
    for (int i = 1; i < 3; ++i) {
      if (r(i, i) > r(k, k)) k = i;
    }
    Vec3d axis;
    axis[static_cast<std::size_t>(k)] = std::sqrt(std::max(0.0, (r(k, k) + 1.0) / 2.0));
    for (int i = 0; i < 3; ++i) {
      if (i != k) axis[static_cast<std::size_t>(i)] = (r(i, k) + r(k, i)) / (4.0 * axis[static_cast<std::size_t>(k)]);
    }
    return axis * (angle / norm(axis));
  }
  return v * (angle / (2.0 * std::sin(angle)));
}

inline Quat quat_from_yaw(double yaw) { return Quat::from_axis_angle({0.0, 0.0, 1.0}, yaw); }

}  // namespace pair
