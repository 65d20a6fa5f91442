// Copyright 2026 The flexsvm Authors
// SPDX-License-Identifier: Apache-2.0

#include "flexsvm/svmgen.hpp"

namespace flexsvm::svmgen {

InferenceResult run_inference(const mlkit::QuantizedModel& model,
                              std::span<const std::uint8_t> x, Variant variant,
                              const InferenceConfig& config) {
  coresim::SimOptions opts;
  opts.record_traces = config.record_traces;
  coresim::Simulator sim(config.mem, config.cost, opts);
  InferenceResult out;
  if (variant == Variant::Accel) {
    accel::SvmAccelerator acc(config.latency);
    sim.attach(acc);
    out.report = sim.run(gen_accel(model, x));
    out.saturations = acc.saturation_count();
    out.predicted = interpret(out.report.outputs, model.scheme, model.num_classes);
  } else {
    out.report = sim.run(gen_baseline(model, x));
    out.predicted = interpret_baseline(out.report.outputs, model.scheme, model.num_classes);
  }
  out.report.predicted_class = out.predicted;
  return out;
}

}  // namespace flexsvm::svmgen
