// Copyright 2026 The flexsvm Authors
// SPDX-License-Identifier: Apache-2.0

// Writes the generated benchmark datasets into a directory:
//   balance_scale.csv  exact enumeration of the balance-scale rule
//   seeds.csv, vertebral3c.csv, dermatology.csv  seeded surrogates with the
//   class sizes, feature sets and per-class statistics of the public data

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "flexsvm/mlkit.hpp"

namespace {

using flexsvm::mlkit::Rng;

std::ofstream open(const std::filesystem::path& p) {
  std::ofstream out(p);
  if (!out) throw std::runtime_error(fmt::format("cannot write {}", p.string()));
  return out;
}

void balance_scale(const std::filesystem::path& dir) {
  auto out = open(dir / "balance_scale.csv");
  out << "class,left_weight,left_distance,right_weight,right_distance\n";
  for (int lw = 1; lw <= 5; ++lw)
    for (int ld = 1; ld <= 5; ++ld)
      for (int rw = 1; rw <= 5; ++rw)
        for (int rd = 1; rd <= 5; ++rd) {
          const int l = lw * ld;
          const int r = rw * rd;
          const char cls = l > r ? 'L' : (l == r ? 'B' : 'R');
          out << fmt::format("{},{},{},{},{}\n", cls, lw, ld, rw, rd);
        }
}

struct SeedClass {
  int label;
  int count;
  double area, area_sd, compact, compact_sd, length, length_sd, width, width_sd, asym, asym_sd,
      groove, groove_sd;
};

void seeds(const std::filesystem::path& dir, std::uint64_t seed) {
  const std::array<SeedClass, 3> classes{{
      {1, 70, 14.33, 1.22, 0.880, 0.016, 5.51, 0.23, 3.24, 0.18, 2.67, 1.17, 5.09, 0.26},
      {2, 70, 18.33, 1.44, 0.884, 0.016, 6.15, 0.27, 3.68, 0.19, 3.64, 1.18, 6.02, 0.25},
      {3, 70, 11.87, 0.72, 0.849, 0.022, 5.23, 0.14, 2.85, 0.15, 4.79, 1.34, 5.12, 0.16},
  }};
  Rng rng(seed);
  auto out = open(dir / "seeds.csv");
  out << "area,perimeter,compactness,kernel_length,kernel_width,asymmetry,groove_length,class\n";
  for (const auto& c : classes) {
    for (int i = 0; i < c.count; ++i) {
      const double size = rng.normal();
      const double area = c.area + c.area_sd * size;
      const double compact = std::clamp(c.compact + c.compact_sd * rng.normal(), 0.80, 0.92);
      const double perimeter = std::sqrt(4.0 * std::numbers::pi * area / compact);
      const double length = c.length + c.length_sd * (0.85 * size + 0.53 * rng.normal());
      const double width = c.width + c.width_sd * (0.85 * size + 0.53 * rng.normal());
      const double asym = std::max(0.5, c.asym + c.asym_sd * rng.normal());
      const double groove = c.groove + c.groove_sd * (0.6 * size + 0.8 * rng.normal());
      out << fmt::format("{:.2f},{:.2f},{:.4f},{:.3f},{:.3f},{:.3f},{:.3f},{}\n", area, perimeter,
                         compact, length, width, asym, groove, c.label);
    }
  }
}

struct SpineClass {
  const char* label;
  int count;
  double pt, pt_sd, ss, ss_sd, lla, lla_sd, pr, pr_sd, gs, gs_sd;
};

void vertebral(const std::filesystem::path& dir, std::uint64_t seed) {
  const std::array<SpineClass, 3> classes{{
      {"Hernia", 60, 17.4, 7.0, 30.1, 7.6, 35.5, 9.8, 116.5, 9.4, 2.5, 5.5},
      {"Spondylolisthesis", 150, 20.7, 11.5, 50.8, 12.3, 64.1, 16.4, 114.5, 15.6, 51.9, 40.1},
      {"Normal", 100, 12.8, 6.8, 38.9, 9.6, 43.5, 12.4, 123.9, 9.0, 2.2, 6.3},
  }};
  Rng rng(seed);
  auto out = open(dir / "vertebral3c.csv");
  out << "pelvic_incidence,pelvic_tilt,lumbar_lordosis_angle,sacral_slope,pelvic_radius,"
         "spondylolisthesis_grade,class\n";
  for (const auto& c : classes) {
    for (int i = 0; i < c.count; ++i) {
      const double pt = c.pt + c.pt_sd * rng.normal();
      const double ss = std::max(10.0, c.ss + c.ss_sd * rng.normal());
      const double pi = pt + ss;  // pelvic incidence = tilt + sacral slope
      const double zss = (ss - c.ss) / c.ss_sd;
      const double lla = c.lla + c.lla_sd * (0.7 * zss + 0.71 * rng.normal());
      const double pr = c.pr + c.pr_sd * rng.normal();
      double gs = c.gs + c.gs_sd * rng.normal();
      if (c.gs > 10.0) gs = std::max(5.0, gs);
      out << fmt::format("{:.2f},{:.2f},{:.2f},{:.2f},{:.2f},{:.2f},{}\n", pi, pt, lla, ss, pr, gs,
                         c.label);
    }
  }
}

constexpr std::array<const char*, 34> kDermFeatures{
    "erythema", "scaling", "definite_borders", "itching", "koebner_phenomenon",
    "polygonal_papules", "follicular_papules", "oral_mucosal_involvement",
    "knee_and_elbow_involvement", "scalp_involvement", "family_history",
    "melanin_incontinence", "eosinophils_in_infiltrate", "pnl_infiltrate",
    "fibrosis_papillary_dermis", "exocytosis", "acanthosis", "hyperkeratosis", "parakeratosis",
    "clubbing_rete_ridges", "elongation_rete_ridges", "thinning_suprapapillary_epidermis",
    "spongiform_pustule", "munro_microabcess", "focal_hypergranulosis",
    "disappearance_granular_layer", "vacuolisation_basal_layer", "spongiosis",
    "saw_tooth_rete_ridges", "follicular_horn_plug", "perifollicular_parakeratosis",
    "inflammatory_mononuclear_infiltrate", "band_like_infiltrate", "age"};

struct DermClass {
  int label;
  int count;
  std::array<double, 33> level;  // mean ordinal level per feature; slot 10 = P(family history)
  double age, age_sd;
};

void dermatology(const std::filesystem::path& dir, std::uint64_t seed) {
  // Common clinical/histological background, then per-class markers.
  auto base = [] {
    std::array<double, 33> b{};
    b.fill(0.1);
    b[0] = 2.0;   // erythema
    b[1] = 1.7;   // scaling
    b[2] = 1.2;   // definite borders
    b[3] = 1.2;   // itching
    b[10] = 0.1;  // family history probability
    b[15] = 1.0;  // exocytosis
    b[16] = 1.5;  // acanthosis
    b[18] = 1.2;  // parakeratosis
    b[31] = 1.8;  // inflammatory mononuclear infiltrate
    return b;
  };
  std::vector<DermClass> classes;
  {
    DermClass c{1, 112, base(), 38, 15};
    c.level[2] = 2.0; c.level[4] = 0.8; c.level[8] = 2.0; c.level[9] = 1.8; c.level[10] = 0.35;
    c.level[13] = 1.2; c.level[15] = 0.6; c.level[18] = 2.0; c.level[19] = 2.3; c.level[20] = 2.3;
    c.level[21] = 2.0; c.level[22] = 1.2; c.level[23] = 1.3; c.level[25] = 1.5;
    classes.push_back(c);
  }
  {
    DermClass c{2, 61, base(), 36, 14};
    c.level[1] = 1.5; c.level[2] = 0.8; c.level[8] = 0.4; c.level[9] = 1.3; c.level[15] = 2.0;
    c.level[18] = 1.6; c.level[27] = 1.6; c.level[30] = 0.8;
    classes.push_back(c);
  }
  {
    DermClass c{3, 72, base(), 38, 13};
    c.level[3] = 2.3; c.level[4] = 1.2; c.level[5] = 2.3; c.level[7] = 2.0; c.level[11] = 2.0;
    c.level[15] = 1.6; c.level[18] = 0.4; c.level[24] = 2.0; c.level[26] = 2.2; c.level[28] = 2.1;
    c.level[32] = 2.6;
    classes.push_back(c);
  }
  {
    DermClass c{4, 49, base(), 28, 12};
    c.level[1] = 1.3; c.level[2] = 1.6; c.level[3] = 1.5; c.level[15] = 1.8; c.level[18] = 0.5;
    c.level[27] = 2.3; c.level[31] = 1.2;
    classes.push_back(c);
  }
  {
    DermClass c{5, 52, base(), 42, 14};
    c.level[0] = 1.8; c.level[1] = 1.2; c.level[3] = 2.3; c.level[14] = 2.4; c.level[16] = 2.3;
    c.level[17] = 1.4; c.level[18] = 0.8; c.level[20] = 1.6;
    classes.push_back(c);
  }
  {
    DermClass c{6, 20, base(), 10, 6};
    c.level[6] = 2.2; c.level[8] = 1.6; c.level[9] = 0.8; c.level[17] = 1.5; c.level[29] = 2.2;
    c.level[30] = 2.2;
    classes.push_back(c);
  }

  Rng rng(seed);
  auto out = open(dir / "dermatology.csv");
  out << fmt::format("{},class\n", fmt::join(kDermFeatures, ","));
  for (const auto& c : classes) {
    for (int i = 0; i < c.count; ++i) {
      std::vector<std::string> row;
      for (std::size_t j = 0; j < c.level.size(); ++j) {
        int v = 0;
        if (j == 10) {
          v = rng.uniform() < c.level[j] ? 1 : 0;
        } else {
          v = std::clamp(static_cast<int>(std::lround(c.level[j] + 0.55 * rng.normal())), 0, 3);
        }
        row.push_back(std::to_string(v));
      }
      const int age = std::clamp(static_cast<int>(std::lround(c.age + c.age_sd * rng.normal())), 0, 75);
      row.push_back(std::to_string(age));
      out << fmt::format("{},{}\n", fmt::join(row, ","), c.label);
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: gendata <output-dir>\n";
    return 2;
  }
  try {
    const std::filesystem::path dir = argv[1];
    std::filesystem::create_directories(dir);
    balance_scale(dir);
    seeds(dir, 0x5EED5);
    vertebral(dir, 0x5B1E);
    dermatology(dir, 0xDE53);
  } catch (const std::exception& e) {
    std::cerr << "gendata: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
