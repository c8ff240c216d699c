#pragma once

#include <Eigen/Core>

// Bit-exact equality for Eigen types (tests that assert "untouched" data).
template <typename A, typename B>
bool same_bits(const A& a, const B& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         (a.array() == b.array()).all();
}
