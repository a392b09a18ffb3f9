#include "doctest.h"

#include "herdgraph/config.hpp"
#include "herdgraph/error.hpp"

using namespace herdgraph;
using Json = nlohmann::ordered_json;

namespace {

Error config_error(const Json& j) {
  try {
    config_from_json(j);
  } catch (const Error& e) {
    return e;
  }
  FAIL("config was accepted");
  return Error(ErrorKind::Config, "", "");
}

}  // namespace

TEST_CASE("defaults round-trip through json") {
  const Json j = config_to_json(Config{});
  const Config c = config_from_json(j);
  CHECK(config_to_json(c) == j);
  CHECK(c.gate.alpha == 0.35);
  CHECK(c.gate.dwell_s == 4.0);
  CHECK(c.smoother.window == 7);
  CHECK(c.eval.alphas == std::vector<double>{0.30, 0.35, 0.40});
}

TEST_CASE("every key is required") {
  Json j = config_to_json(Config{});
  j["gate"].erase("alpha");
  const Error e = config_error(j);
  CHECK(e.kind() == ErrorKind::Config);
  CHECK(e.code() == "MissingKey");
  CHECK(std::string(e.what()).find("gate.alpha") != std::string::npos);

  j = config_to_json(Config{});
  j.erase("svm");
  CHECK(config_error(j).code() == "MissingKey");
}

TEST_CASE("unknown keys are rejected") {
  Json j = config_to_json(Config{});
  j["tracker"]["noise"]["extra"] = 1;
  const Error e = config_error(j);
  CHECK(e.code() == "UnknownKey");
  CHECK(std::string(e.what()).find("tracker.noise.extra") != std::string::npos);
}

TEST_CASE("invalid values name the key") {
  Json j = config_to_json(Config{});
  j["smoother"]["window"] = 4;
  Error e = config_error(j);
  CHECK(e.code() == "InvalidValue");
  CHECK(std::string(e.what()).find("smoother") != std::string::npos);

  j = config_to_json(Config{});
  j["workers"] = 0;
  e = config_error(j);
  CHECK(e.code() == "InvalidValue");
  CHECK(std::string(e.what()).find("workers") != std::string::npos);

  j = config_to_json(Config{});
  j["gate"]["alpha"] = "wide";
  e = config_error(j);
  CHECK(e.code() == "InvalidValue");
  CHECK(std::string(e.what()).find("gate.alpha") != std::string::npos);

  j = config_to_json(Config{});
  j["simd"] = "sse";
  CHECK(config_error(j).code() == "InvalidValue");
}

TEST_CASE("changed values survive the round trip") {
  Config c;
  c.seed = 42;
  c.gate.alpha = 0.4;
  c.svm.gamma_mode = GammaMode::Fixed;
  c.svm.gamma = 0.25;
  c.network.weight_mode = WeightMode::ConfidenceSum;
  c.synth.roster = {"X", "Y", "Z"};
  const Config back = config_from_json(config_to_json(c));
  CHECK(back.seed == 42);
  CHECK(back.gate.alpha == 0.4);
  CHECK(back.svm.gamma_mode == GammaMode::Fixed);
  CHECK(back.svm.gamma == 0.25);
  CHECK(back.network.weight_mode == WeightMode::ConfidenceSum);
  CHECK(back.synth.roster == c.synth.roster);
}
