#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace spinsplit {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// Small fixed-size linear algebra (3-vectors / 3x3 matrices).
// ---------------------------------------------------------------------------

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline Mat3 mat3_zero() { return {{{0, 0, 0}, {0, 0, 0}, {0, 0, 0}}}; }
inline Mat3 mat3_identity() { return {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}; }

inline Vec3 mat_vec(const Mat3& m, const Vec3& v) {
  Vec3 r{};
  for (int i = 0; i < 3; ++i) r[i] = m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2];
  return r;
}

inline Vec3 mat_tvec(const Mat3& m, const Vec3& v) {
  Vec3 r{};
  for (int i = 0; i < 3; ++i) r[i] = m[0][i] * v[0] + m[1][i] * v[1] + m[2][i] * v[2];
  return r;
}

inline Mat3 mat_mul(const Mat3& a, const Mat3& b) {
  Mat3 r = mat3_zero();
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k)
      for (int j = 0; j < 3; ++j) r[i][j] += a[i][k] * b[k][j];
  return r;
}

inline Mat3 transpose(const Mat3& a) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i][j] = a[j][i];
  return r;
}

// Active rotation matrix about a coordinate axis (right-handed).
Mat3 rotation_about(int axis, double angle);
// R = Rz(alpha) * Ry(beta) * Rz(gamma)
Mat3 rotation_euler_zyz(double alpha, double beta, double gamma);

// ---------------------------------------------------------------------------
// Operator words.
// ---------------------------------------------------------------------------

enum class Axis : std::uint8_t { X = 0, Y = 1, Z = 2 };

inline char axis_name(Axis a) { return "xyz"[static_cast<int>(a)]; }

// Ordered product of collective spin components, degree 1..4.
using Word = std::vector<Axis>;

std::string word_to_string(const Word& w);
Word word_from_string(const std::string& s);  // e.g. "xzy"

// All words over {x,y,z} with 1 <= degree <= max_degree, lexicographic.
std::vector<Word> all_words(int max_degree);

enum class Site : std::uint8_t { A = 0, B = 1 };

// Product of local collective spin components, A factors first (sites commute).
struct LcsoMonomial {
  Word a;  // factors acting at site A, in original order
  Word b;  // factors acting at site B, in original order

  int degree() const { return static_cast<int>(a.size() + b.size()); }
  bool operator<(const LcsoMonomial& o) const { return a != o.a ? a < o.a : b < o.b; }
  bool operator==(const LcsoMonomial& o) const { return a == o.a && b == o.b; }
};

std::string monomial_to_string(const LcsoMonomial& m);  // e.g. "xA yA zB"

// All monomials with 1 <= degree <= max_degree.
std::vector<LcsoMonomial> all_lcso_monomials(int max_degree);

// ---------------------------------------------------------------------------
// Combinatorics.
// ---------------------------------------------------------------------------

double ln_factorial(int n);
double ln_choose(int n, int k);
// 2^-n * C(n,k)
double binomial_weight(int n, int k);
// n (n-1) ... (n-r+1) as double, exact for n <= 1e4 and r <= 4
double falling_factorial(int n, int r);

// ---------------------------------------------------------------------------
// Deterministic random numbers. std::distributions are implementation
// defined, so sampling is done by hand on top of mt19937_64.
// ---------------------------------------------------------------------------

class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  double uniform();  // [0, 1)
  double uniform(double lo, double hi);
  double normal();  // standard normal, Box-Muller
  std::uint64_t next_u64();
  int uniform_int(int lo, int hi);  // inclusive bounds

  // Independent deterministic substream (for per-restart / per-worker seeding).
  Rng substream(std::uint64_t stream) const;

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Deterministic quasi-uniform directions on the unit sphere (Fibonacci lattice).
Vec3 fibonacci_sphere_point(int index, int count);

}  // namespace spinsplit
