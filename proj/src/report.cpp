#include "mcsense/report.hpp"

#include <json.hpp>

#include "mcsense/error.hpp"

namespace mcsense {

using nlohmann::json;

std::string detection_report(const DetectionResult& r) {
  json steps = json::array();
  for (const auto& s : r.steps) {
    steps.push_back({{"channel", s.channel}, {"j", s.j}, {"threshold", s.threshold}});
  }
  json doc = {
      {"method", "nlls"},
      {"pattern", {{"L", r.pattern.channels()}, {"cosets", r.pattern.cosets()}}},
      {"sigma2", r.sigma2},
      {"initial_j", r.initial_j},
      {"steps", steps},
      {"b_hat", r.b_hat.indices()},
      {"N_hat", r.n_hat},
      {"final_j", r.final_j},
      {"terminated_by", std::string(to_string(r.terminated_by))},
  };
  return doc.dump();
}

DetectionResult parse_detection_report(std::string_view line) {
  try {
    const auto doc = json::parse(line);
    const int L = doc.at("pattern").at("L").get<int>();
    CosetPattern pattern(L, doc.at("pattern").at("cosets").get<std::vector<int>>());
    DetectionResult r{.pattern = pattern};
    r.sigma2 = doc.at("sigma2").get<double>();
    r.initial_j = doc.at("initial_j").get<double>();
    for (const auto& s : doc.at("steps")) {
      r.steps.push_back({s.at("channel").get<int>(), s.at("j").get<double>(),
                         s.at("threshold").get<double>()});
    }
    r.b_hat = ActiveChannelSet(doc.at("b_hat").get<std::vector<int>>(), L);
    r.n_hat = doc.at("N_hat").get<int>();
    r.final_j = doc.at("final_j").get<double>();
    const auto term = doc.at("terminated_by").get<std::string>();
    if (term == "threshold-met") {
      r.terminated_by = Termination::ThresholdMet;
    } else if (term == "Nmax-reached") {
      r.terminated_by = Termination::NmaxReached;
    } else if (term == "p-exhausted") {
      r.terminated_by = Termination::PExhausted;
    } else {
      throw Error(ErrorKind::BadFormat, "unknown termination '" + term + "'");
    }
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::BadFormat, std::string("detection report: ") + e.what());
  }
}

std::string ed_report(const EdDecision& d) {
  std::string bits;
  bits.reserve(d.occupied.size());
  for (bool b : d.occupied) bits.push_back(b ? '1' : '0');
  json doc = {{"method", "ed"},
              {"threshold", d.threshold},
              {"decisions", bits},
              {"statistics", d.statistics},
              {"b_hat", d.flagged().indices()}};
  return doc.dump();
}

}  // namespace mcsense
