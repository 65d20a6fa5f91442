// Copyright 2026 The flexsvm Authors
// SPDX-License-Identifier: Apache-2.0

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "flexsvm/mlkit.hpp"

// Archive layout, one record per line:
//   flexsvm-model 1
//   kind float|quantized
//   scheme ovr|ovo
//   bits <n>            (quantized only)
//   classes <m>
//   dims <d>
//   scale <s_w>         (quantized only)
//   norm_min <d values>
//   norm_max <d values>
//   classifier <pos> <neg> <bias> <d weights>
//   end

namespace flexsvm::mlkit {

namespace {

constexpr std::string_view kMagic = "flexsvm-model 1";

void write_header(std::ostream& out, std::string_view kind, Scheme scheme) {
  out << kMagic << '\n' << "kind " << kind << '\n' << "scheme " << to_string(scheme) << '\n';
}

void write_norm(std::ostream& out, const Normalizer& norm) {
  out << fmt::format("norm_min {}\n", fmt::join(norm.min(), " "));
  out << fmt::format("norm_max {}\n", fmt::join(norm.max(), " "));
}

struct Reader {
  std::istream& in;
  std::size_t line_no = 0;

  std::istringstream next(std::string_view key) {
    std::string line;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty() || line.front() == '#') continue;
      std::istringstream ss(line);
      std::string k;
      ss >> k;
      if (k != key) fail(fmt::format("expected '{}', found '{}'", key, k));
      return ss;
    }
    fail(fmt::format("unexpected end of archive, expected '{}'", key));
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw DataError(fmt::format("model archive line {}: {}", line_no, msg));
  }

  template <class T>
  T scalar(std::string_view key) {
    auto ss = next(key);
    T v{};
    if (!(ss >> v)) fail(fmt::format("bad value for '{}'", key));
    return v;
  }

  template <class T>
  std::vector<T> list(std::istringstream& ss, std::size_t n, std::string_view what) {
    std::vector<T> v(n);
    for (auto& x : v) {
      if (!(ss >> x)) fail(fmt::format("short {} list", what));
    }
    std::string extra;
    if (ss >> extra) fail(fmt::format("trailing data in {}", what));
    return v;
  }
};

struct Common {
  std::string kind;
  Scheme scheme = Scheme::OvR;
  unsigned bits = 0;
  std::size_t m = 0;
  std::size_t d = 0;
  double scale = 0.0;
  Normalizer norm;
};

Common read_common(Reader& r, std::string_view want_kind) {
  std::string magic;
  while (std::getline(r.in, magic)) {
    ++r.line_no;
    if (!magic.empty() && magic.front() != '#') break;
  }
  if (magic != kMagic) r.fail("not a flexsvm model archive");
  Common c;
  c.kind = r.scalar<std::string>("kind");
  if (c.kind != want_kind) r.fail(fmt::format("archive holds a {} model, expected {}", c.kind, want_kind));
  c.scheme = scheme_from_string(r.scalar<std::string>("scheme"));
  if (c.kind == "quantized") c.bits = r.scalar<unsigned>("bits");
  c.m = r.scalar<std::size_t>("classes");
  c.d = r.scalar<std::size_t>("dims");
  if (c.kind == "quantized") c.scale = r.scalar<double>("scale");
  auto lo = r.next("norm_min");
  auto lo_v = r.list<double>(lo, c.d, "norm_min");
  auto hi = r.next("norm_max");
  auto hi_v = r.list<double>(hi, c.d, "norm_max");
  c.norm = Normalizer(std::move(lo_v), std::move(hi_v));
  return c;
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p);
  if (!out) throw DataError(fmt::format("cannot write model archive {}", p.string()));
  return out;
}

std::ifstream open_in(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw DataError(fmt::format("cannot open model archive {}", p.string()));
  return in;
}

}  // namespace

void save_model(std::ostream& out, const FloatModel& model, const Normalizer& norm) {
  write_header(out, "float", model.scheme);
  out << fmt::format("classes {}\ndims {}\n", model.num_classes, model.dims);
  write_norm(out, norm);
  for (const auto& c : model.classifiers) {
    out << fmt::format("classifier {} {} {} {}\n", c.pos, c.neg, c.b, fmt::join(c.w, " "));
  }
  out << "end\n";
}

void save_model(std::ostream& out, const QuantizedModel& model, const Normalizer& norm) {
  write_header(out, "quantized", model.scheme);
  out << fmt::format("bits {}\nclasses {}\ndims {}\nscale {}\n", model.bits, model.num_classes,
                     model.dims, model.scale);
  write_norm(out, norm);
  for (const auto& c : model.classifiers) {
    out << fmt::format("classifier {} {} {} {}\n", c.pos, c.neg, c.b, fmt::join(c.w, " "));
  }
  out << "end\n";
}

FloatArchive load_float_model(std::istream& in) {
  Reader r{in};
  Common c = read_common(r, "float");
  FloatArchive a;
  a.norm = std::move(c.norm);
  a.model.scheme = c.scheme;
  a.model.num_classes = c.m;
  a.model.dims = c.d;
  for (std::size_t i = 0; i < classifier_count(c.scheme, c.m); ++i) {
    auto ss = r.next("classifier");
    Classifier cl;
    if (!(ss >> cl.pos >> cl.neg >> cl.b)) r.fail("bad classifier header");
    cl.w = r.list<double>(ss, c.d, "weights");
    a.model.classifiers.push_back(std::move(cl));
  }
  r.next("end");
  return a;
}

QuantizedArchive load_quantized_model(std::istream& in) {
  Reader r{in};
  Common c = read_common(r, "quantized");
  QuantizedArchive a;
  a.norm = std::move(c.norm);
  a.model.scheme = c.scheme;
  a.model.bits = accel::weight_bits(accel::mode_for_bits(c.bits));
  a.model.num_classes = c.m;
  a.model.dims = c.d;
  a.model.scale = c.scale;
  for (std::size_t i = 0; i < classifier_count(c.scheme, c.m); ++i) {
    auto ss = r.next("classifier");
    QuantizedClassifier cl;
    if (!(ss >> cl.pos >> cl.neg >> cl.b)) r.fail("bad classifier header");
    cl.w = r.list<std::int32_t>(ss, c.d, "weights");
    for (std::int32_t v : cl.w) {
      if (v > a.model.qmax() || v < -a.model.qmax()) r.fail(fmt::format("weight {} out of range", v));
    }
    a.model.classifiers.push_back(std::move(cl));
  }
  r.next("end");
  return a;
}

void save_model_file(const std::filesystem::path& path, const FloatModel& m, const Normalizer& n) {
  auto out = open_out(path);
  save_model(out, m, n);
}

void save_model_file(const std::filesystem::path& path, const QuantizedModel& m,
                     const Normalizer& n) {
  auto out = open_out(path);
  save_model(out, m, n);
}

FloatArchive load_float_model_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  return load_float_model(in);
}

QuantizedArchive load_quantized_model_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  return load_quantized_model(in);
}

}  // namespace flexsvm::mlkit
