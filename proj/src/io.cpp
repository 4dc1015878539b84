// Copyright 2026 The nfrec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "nfrec/io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "nfrec/error.hpp"

namespace nfrec {
namespace {

constexpr int kFormatVersion = 1;

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Token reader that skips '#' comment lines and reports what it expected.
class Tokens {
 public:
  Tokens(std::istream& in, std::string what) : what_(std::move(what)) {
    std::string line;
    while (std::getline(in, line)) {
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      std::istringstream is(line);
      std::string tok;
      while (is >> tok) tokens_.push_back(tok);
    }
  }

  std::string word() {
    if (pos_ >= tokens_.size()) fail("unexpected end of input");
    return tokens_[pos_++];
  }

  void expect(const std::string& keyword) {
    const std::string got = word();
    if (got != keyword) fail("expected '" + keyword + "', got '" + got + "'");
  }

  long integer() {
    const std::string tok = word();
    std::size_t used = 0;
    long v = 0;
    try {
      v = std::stol(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) fail("expected an integer, got '" + tok + "'");
    return v;
  }

  double number() {
    const std::string tok = word();
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) fail("expected a number, got '" + tok + "'");
    return v;
  }

  void header(const std::string& kind) {
    expect(kind);
    const long version = integer();
    if (version != kFormatVersion)
      fail("unsupported format version " + std::to_string(version));
  }

  void finish() {
    if (pos_ != tokens_.size()) fail("trailing content");
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw DataError(what_ + ": " + msg + " (token " + std::to_string(pos_) + ")");
  }

 private:
  std::string what_;
  std::vector<std::string> tokens_;
  std::size_t pos_ = 0;
};

int read_size(Tokens& t, const char* label) {
  t.expect(label);
  const long k = t.integer();
  if (k < 1 || k > 1'000'000) t.fail(std::string(label) + " out of range");
  return static_cast<int>(k);
}

int read_index(Tokens& t, int k) {
  const long i = t.integer();
  if (i < 0 || i >= k) t.fail("index " + std::to_string(i) + " out of range");
  return static_cast<int>(i);
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path.string());
  return in;
}

}  // namespace

void write_instance(std::ostream& out, const Instance& instance) {
  const int k = instance.size();
  out << "nfrec-instance " << kFormatVersion << '\n' << "K " << k << '\n';
  out << "similarity " << instance.edge_count() << '\n';
  for (int i = 0; i < k; ++i)
    for (const auto& e : instance.neighbors(i))
      out << i << ' ' << e.index << ' ' << format_double(e.value) << '\n';
  out << "cost\n";
  for (int i = 0; i < k; ++i) out << format_double(instance.cost(i)) << '\n';
  out << "popularity\n";
  for (int i = 0; i < k; ++i) out << format_double(instance.popularity()(i)) << '\n';
  out << "cached " << instance.cached().size() << '\n';
  for (std::size_t m = 0; m < instance.cached().size(); ++m)
    out << (m ? " " : "") << instance.cached()[m];
  out << '\n';
}

Instance read_instance(std::istream& in) {
  Tokens t(in, "instance file");
  t.header("nfrec-instance");
  const int k = read_size(t, "K");
  t.expect("similarity");
  const long nnz = t.integer();
  if (nnz < 0 || nnz > static_cast<long>(k) * k) t.fail("bad similarity count");
  Matrix u = Matrix::Zero(k, k);
  for (long e = 0; e < nnz; ++e) {
    const int i = read_index(t, k);
    const int j = read_index(t, k);
    u(i, j) = t.number();
  }
  t.expect("cost");
  Vector c(k);
  for (int i = 0; i < k; ++i) c(i) = t.number();
  t.expect("popularity");
  Vector p0(k);
  for (int i = 0; i < k; ++i) p0(i) = t.number();
  t.expect("cached");
  const long m = t.integer();
  if (m < 0 || m > k) t.fail("bad cached count");
  std::vector<int> cached;
  for (long e = 0; e < m; ++e) cached.push_back(read_index(t, k));
  t.finish();
  try {
    return Instance(std::move(u), std::move(c), std::move(p0), std::move(cached));
  } catch (const InvalidArgument& e) {
    throw DataError(std::string("instance file: ") + e.what());
  }
}

void write_policy(std::ostream& out, const Policy& policy) {
  const int k = policy.size();
  std::size_t nnz = 0;
  for (int i = 0; i < k; ++i) nnz += policy.support(i).size();
  out << "nfrec-policy " << kFormatVersion << '\n'
      << "K " << k << " N " << policy.batch_size() << '\n'
      << "entries " << nnz << '\n';
  for (int i = 0; i < k; ++i)
    for (const auto& e : policy.support(i))
      out << i << ' ' << e.index << ' ' << format_double(e.value) << '\n';
}

Policy read_policy(std::istream& in) {
  Tokens t(in, "policy file");
  t.header("nfrec-policy");
  const int k = read_size(t, "K");
  const int n = read_size(t, "N");
  t.expect("entries");
  const long nnz = t.integer();
  if (nnz < 0 || nnz > static_cast<long>(k) * k) t.fail("bad entry count");
  Matrix r = Matrix::Zero(k, k);
  for (long e = 0; e < nnz; ++e) {
    const int i = read_index(t, k);
    const int j = read_index(t, k);
    r(i, j) = t.number();
  }
  t.finish();
  try {
    return Policy(std::move(r), n);
  } catch (const InvalidArgument& e) {
    throw DataError(std::string("policy file: ") + e.what());
  }
}

void write_values(std::ostream& out, const Vector& values) {
  out << "nfrec-values " << kFormatVersion << '\n' << "K " << values.size() << '\n';
  for (Eigen::Index i = 0; i < values.size(); ++i) out << format_double(values(i)) << '\n';
}

Vector read_values(std::istream& in) {
  Tokens t(in, "values file");
  t.header("nfrec-values");
  const int k = read_size(t, "K");
  Vector v(k);
  for (int i = 0; i < k; ++i) v(i) = t.number();
  t.finish();
  return v;
}

void save_instance(const std::filesystem::path& path, const Instance& instance) {
  auto out = open_out(path);
  write_instance(out, instance);
}
Instance load_instance(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_instance(in);
}
void save_policy(const std::filesystem::path& path, const Policy& policy) {
  auto out = open_out(path);
  write_policy(out, policy);
}
Policy load_policy(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_policy(in);
}
void save_values(const std::filesystem::path& path, const Vector& values) {
  auto out = open_out(path);
  write_values(out, values);
}
Vector load_values(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_values(in);
}

void save_text(const std::filesystem::path& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
}

std::uint64_t instance_fingerprint(const Instance& instance) {
  std::ostringstream os;
  write_instance(os, instance);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : os.str()) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace nfrec
