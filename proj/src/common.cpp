#include "spinsplit/common.hpp"

#include <algorithm>
#include <limits>

namespace spinsplit {

Mat3 rotation_about(int axis, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  switch (axis) {
    case 0: return {{{1, 0, 0}, {0, c, -s}, {0, s, c}}};
    case 1: return {{{c, 0, s}, {0, 1, 0}, {-s, 0, c}}};
    case 2: return {{{c, -s, 0}, {s, c, 0}, {0, 0, 1}}};
    default: throw std::invalid_argument("rotation_about: axis must be 0, 1 or 2");
  }
}

Mat3 rotation_euler_zyz(double alpha, double beta, double gamma) {
  return mat_mul(rotation_about(2, alpha), mat_mul(rotation_about(1, beta), rotation_about(2, gamma)));
}

std::string word_to_string(const Word& w) {
  std::string s;
  for (Axis a : w) s.push_back(axis_name(a));
  return s;
}

Word word_from_string(const std::string& s) {
  Word w;
  for (char c : s) {
    switch (c) {
      case 'x': w.push_back(Axis::X); break;
      case 'y': w.push_back(Axis::Y); break;
      case 'z': w.push_back(Axis::Z); break;
      case ' ': break;
      default: throw std::invalid_argument("word_from_string: bad axis character");
    }
  }
  return w;
}

std::vector<Word> all_words(int max_degree) {
  std::vector<Word> out;
  std::vector<Word> level = {Word{}};
  for (int d = 1; d <= max_degree; ++d) {
    std::vector<Word> next;
    for (const Word& w : level) {
      for (int a = 0; a < 3; ++a) {
        Word v = w;
        v.push_back(static_cast<Axis>(a));
        next.push_back(v);
        out.push_back(std::move(v));
      }
    }
    level = std::move(next);
  }
  return out;
}

std::string monomial_to_string(const LcsoMonomial& m) {
  std::string s;
  for (Axis a : m.a) {
    if (!s.empty()) s.push_back(' ');
    s.push_back(axis_name(a));
    s.push_back('A');
  }
  for (Axis a : m.b) {
    if (!s.empty()) s.push_back(' ');
    s.push_back(axis_name(a));
    s.push_back('B');
  }
  return s;
}

std::vector<LcsoMonomial> all_lcso_monomials(int max_degree) {
  // words_by_len[d] = all words of length d (length 0 -> the empty word)
  std::vector<std::vector<Word>> words_by_len(max_degree + 1);
  words_by_len[0] = {Word{}};
  for (const Word& w : all_words(max_degree)) words_by_len[w.size()].push_back(w);

  std::vector<LcsoMonomial> out;
  for (int d = 1; d <= max_degree; ++d) {
    for (int da = 0; da <= d; ++da) {
      for (const Word& wa : words_by_len[da])
        for (const Word& wb : words_by_len[d - da]) out.push_back({wa, wb});
    }
  }
  return out;
}

double ln_factorial(int n) {
  if (n < 0) throw std::invalid_argument("ln_factorial: negative argument");
  return std::lgamma(static_cast<double>(n) + 1.0);
}

double ln_choose(int n, int k) {
  if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
  return ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k);
}

double binomial_weight(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  return std::exp(ln_choose(n, k) - n * std::log(2.0));
}

double falling_factorial(int n, int r) {
  double p = 1.0;
  for (int i = 0; i < r; ++i) p *= static_cast<double>(n - i);
  return p;
}

namespace {
std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}
}  // namespace

Rng::Rng(std::uint64_t seed) : seed_(seed), gen_(splitmix64(seed)) {}

std::uint64_t Rng::next_u64() { return gen_(); }

double Rng::uniform() {
  // 53 random bits -> [0, 1)
  return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(2.0 * kPi * u2);
  has_spare_ = true;
  return r * std::cos(2.0 * kPi * u2);
}

int Rng::uniform_int(int lo, int hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(gen_() % span);
}

Rng Rng::substream(std::uint64_t stream) const {
  return Rng(splitmix64(seed_ ^ splitmix64(stream + 1)));
}

Vec3 fibonacci_sphere_point(int index, int count) {
  const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
  const double z = 1.0 - 2.0 * (index + 0.5) / count;
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  const double phi = 2.0 * kPi * std::fmod(index / golden, 1.0);
  return {r * std::cos(phi), r * std::sin(phi), z};
}

}  // namespace spinsplit
