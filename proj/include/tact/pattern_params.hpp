#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tact/diagnostics.hpp"

namespace tact {

enum class PatternKind { PubSub, ReqRes, IniExe, SenRec };

inline const char* pattern_name(PatternKind k) {
  switch (k) {
    case PatternKind::PubSub: return "pubsub";
    case PatternKind::ReqRes: return "reqres";
    case PatternKind::IniExe: return "iniexe";
    case PatternKind::SenRec: return "senrec";
  }
  return "?";
}

struct PubSubParams {
  std::int64_t n_pub = 0;  // minimum separation at the publisher
  std::int64_t l_pub = 0;  // max latency handing off to the substrate
  std::int64_t r_pub = 0;  // lifetime promised at publication
  std::int64_t n_sub = 0;  // minimum separation at the subscriber
  std::int64_t x_sub = 0;  // maximum separation at the subscriber
  std::int64_t l_sub = 0;  // max consumption latency
  std::int64_t r_sub = 0;  // remaining lifetime the subscriber needs
};

struct ReqResParams {
  std::int64_t n_req = 0;
  std::int64_t l_req = 0;
  std::int64_t r_req = 0;
  std::int64_t n_res = 0;
  std::int64_t l_res = 0;
  std::int64_t r_res = 0;
};

struct IniExeParams {
  std::int64_t n_ini = 0;
  std::int64_t l_ini = 0;
  std::int64_t n_exe = 0;
  std::int64_t l_exe = 0;
};

struct SenRecParams {
  std::int64_t n_sen = 0;
  std::int64_t l_sen = 0;
  std::int64_t n_rec = 0;
  std::int64_t l_rec = 0;
};

enum class SubstrateVariant { EqualDelays, PerPatternDelays, Prioritized };

inline const char* substrate_name(SubstrateVariant v) {
  switch (v) {
    case SubstrateVariant::EqualDelays: return "equal";
    case SubstrateVariant::PerPatternDelays: return "per-pattern";
    case SubstrateVariant::Prioritized: return "prioritized";
  }
  return "?";
}

/// The three delay kinds of the substrate template: sender interface to
/// substrate, substrate transit, and receiver interface to application.
struct DelaySet {
  std::vector<std::int64_t> client{1, 2};
  std::vector<std::int64_t> net{1, 2};
  std::vector<std::int64_t> service{1, 2};
};

struct SubstrateConfig {
  SubstrateVariant variant = SubstrateVariant::EqualDelays;
  DelaySet delays;
  // PerPatternDelays: substrate-transit delays per pattern kind.
  std::map<PatternKind, std::vector<std::int64_t>> net_per_pattern;
  // Prioritized: priority per transmit message name (lower handled first).
  std::map<std::string, int> priorities;

  std::vector<Diagnostic> validate() const {
    std::vector<Diagnostic> ds;
    auto check = [&](const std::vector<std::int64_t>& v, const char* what) {
      if (v.empty()) ds.push_back({Severity::Error, std::string(what) + " delay list empty", {}});
      for (auto d : v) {
        if (d < 0) ds.push_back({Severity::Error, std::string(what) + " delay negative", {}});
      }
    };
    check(delays.client, "client");
    check(delays.net, "net");
    check(delays.service, "service");
    for (const auto& [k, v] : net_per_pattern) check(v, pattern_name(k));
    return ds;
  }
};

enum class FailureKind {
  FastPublication,
  Timeout,
  StaleData,
  SlowPublication,
  SlowConsumption,
  FastRequest,
  ExcessLoad,
  DataUnavailable,
  FastInit,
  FastSend,
};

inline const char* failure_message_name(FailureKind k) {
  switch (k) {
    case FailureKind::FastPublication: return "fastPublicationFailure";
    case FailureKind::Timeout: return "timeoutFailure";
    case FailureKind::StaleData: return "staleDataFailure";
    case FailureKind::SlowPublication: return "slowPublicationFailure";
    case FailureKind::SlowConsumption: return "slowConsumptionFailure";
    case FailureKind::FastRequest: return "fastRequestFailure";
    case FailureKind::ExcessLoad: return "excessLoadFailure";
    case FailureKind::DataUnavailable: return "dataUnavailableFailure";
    case FailureKind::FastInit: return "fastInitFailure";
    case FailureKind::FastSend: return "fastSendFailure";
  }
  return "?";
}

inline const std::vector<FailureKind>& all_failure_kinds() {
  static const std::vector<FailureKind> kinds = {
      FailureKind::FastPublication, FailureKind::Timeout,         FailureKind::StaleData,
      FailureKind::SlowPublication, FailureKind::SlowConsumption, FailureKind::FastRequest,
      FailureKind::ExcessLoad,      FailureKind::DataUnavailable, FailureKind::FastInit,
      FailureKind::FastSend,
  };
  return kinds;
}

}  // namespace tact
