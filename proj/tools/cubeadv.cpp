// cubeadv: build and certify hypercube epsilon-packings, generate the
// adversarial instance, and simulate bounded-space online packing.
//
// Exit codes: 0 ok, 1 I/O or internal error, 2 F-family retries exhausted,
// 3 validation failure, 4 exactness violation, 5 usage error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "cubeadv/adversary.hpp"
#include "cubeadv/codes.hpp"
#include "cubeadv/errors.hpp"
#include "cubeadv/packing.hpp"
#include "cubeadv/report.hpp"
#include "cubeadv/serialize.hpp"
#include "cubeadv/simulator.hpp"

namespace {

using namespace cubeadv;

enum Exit : int {
  kOk = 0,
  kIo = 1,
  kRetries = 2,
  kInvalid = 3,
  kInexact = 4,
  kUsage = 5,
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw IoError("cannot write '" + path + "'");
}

Caps parse_caps(const std::string& text) {
  Caps caps;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw InvalidArgument("caps entries look like name=value");
    const std::string key = item.substr(0, eq);
    const BigInt v = parse_bigint(item.substr(eq + 1));
    if (v < 1) throw InvalidArgument("caps must be positive");
    const auto n = v.get_ui();
    if (key == "explicit") {
      caps.explicit_words = n;
    } else if (key == "ie") {
      caps.ie_events = static_cast<int>(std::min<unsigned long>(n, 62));
    } else if (key == "peritem") {
      caps.per_item = n;
    } else if (key == "validate") {
      caps.validate_cubes = n;
    } else {
      throw InvalidArgument("unknown cap '" + key + "' (explicit, ie, peritem, validate)");
    }
  }
  return caps;
}

struct Options {
  int d = 0;
  std::uint64_t seed = 42;
  std::string kind = "probabilistic";
  std::string repr = "implicit";
  std::string eps;
  std::string M;
  std::string scale = "full";
  std::string mode;
  std::string alg = "ClassNextFit";
  std::string in;
  std::string out;
  std::string caps;
  std::string range = "200:2000:200";
  std::uint64_t max_attempts = 1'000'000;
  unsigned threads = 1;
  bool cross_check = false;
  bool materialize = false;
};

int cmd_family(const Options& o) {
  if (o.d < 2) throw InvalidArgument("--d must be >= 2");
  const Caps caps = parse_caps(o.caps);
  CodeFamily fam;
  if (o.kind == "warmup") {
    fam = warmup_family(o.d, caps);
  } else if (o.kind == "probabilistic") {
    BuildOptions b;
    b.caps = caps;
    b.max_attempts = o.max_attempts;
    if (o.repr == "explicit") {
      b.mode = CodeMode::Explicit;
    } else if (o.repr != "implicit") {
      throw InvalidArgument("--repr must be explicit or implicit");
    }
    fam = build_separated_family(o.d, o.seed, b);
  } else {
    throw InvalidArgument("--kind must be warmup or probabilistic");
  }
  const FamilyCheck check = verify_family(fam);
  write_output(o.out, dump(to_json(fam)));
  std::cerr << "family d=" << fam.d << " S=" << fam.S << " codes=" << fam.codes.size()
            << " attempts=" << fam.attempts << " maxIntersection=" << fam.max_intersection << "\n";
  for (const auto& p : check.problems) std::cerr << "  problem: " << p << "\n";
  return check.ok ? kOk : kInvalid;
}

int cmd_pack(const Options& o) {
  const Caps caps = parse_caps(o.caps);
  const CodeFamily fam = family_from_json(parse_json(read_file(o.in)));
  const Rat max_eps(BigInt(1), BigInt(fam.d) * fam.d);
  const Rat eps = o.eps.empty() ? max_eps : Rat::parse(o.eps);
  if (eps.sign() <= 0 || eps > max_eps) {
    throw InvalidArgument("--eps must lie in (0, 1/d^2] = (0, " + max_eps.to_string() + "]");
  }
  bool all_explicit = true;
  BigInt total = 0;
  for (const auto& c : fam.codes) {
    all_explicit = all_explicit && c.is_explicit();
    total += c.size.count;
  }
  PackingMode mode = PackingMode::Counted;
  if (o.mode == "materialized") {
    mode = PackingMode::Materialized;
  } else if (o.mode.empty() || o.mode == "auto") {
    if (all_explicit && total <= BigInt(static_cast<unsigned long>(caps.validate_cubes))) {
      mode = PackingMode::Materialized;
    }
  } else if (o.mode != "counted") {
    throw InvalidArgument("--mode must be auto, materialized or counted");
  }
  const EpsilonPacking p = assemble(fam, eps, mode, caps);
  bool ok = true;
  if (p.mode == PackingMode::Materialized) {
    const ValidationReport r = validate(p);
    ok = r.valid();
    std::cerr << "validation: " << p.cubes.size() << " cubes, " << r.overlaps.size() << " overlaps, "
              << r.outside_unit.size() << " outside, " << r.wrong_side.size() << " wrong side\n";
  } else {
    std::cerr << "counted packing; geometry certified by the family's gapped/separated checks\n";
    const FamilyCheck check = verify_family(fam);
    ok = check.ok;
    for (const auto& msg : check.problems) std::cerr << "  problem: " << msg << "\n";
  }
  const Weight w = weight(p);
  std::cerr << "weight " << w.value.to_decimal(12) << " (" << to_string(w.kind) << ")\n";
  write_output(o.out, dump(to_json(p)));
  return ok ? kOk : kInvalid;
}

int cmd_instance(const Options& o) {
  const Caps caps = parse_caps(o.caps);
  const EpsilonPacking p = packing_from_json(parse_json(read_file(o.in)));
  const BigInt M = o.M.empty() ? BigInt(1) : parse_bigint(o.M);
  const InstanceStream inst = build_instance(p, M, Scale::parse(o.scale), caps);
  const OfflineCertificate cert = offline_bound(inst, &p, caps);
  std::cerr << "offline bins " << cert.bin_count.get_str() << ", universal lower bound "
            << universal_lower_bound(inst).get_str();
  if (cert.bins) std::cerr << ", explicit assignment " << (cert.assignment_valid ? "valid" : "INVALID");
  std::cerr << "\n";
  write_output(o.out, write_instance(inst));
  return cert.bins && !cert.assignment_valid ? kInvalid : kOk;
}

InstanceStream load_instance(const std::string& path) {
  const std::string text = read_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return instance_from_json(parse_json(text));
  return parse_instance(text);
}

int cmd_simulate(const Options& o) {
  const Caps caps = parse_caps(o.caps);
  InstanceStream inst = load_instance(o.in);
  if (!o.M.empty()) inst.M = parse_bigint(o.M);
  SimMode mode = SimMode::Counted;
  if (o.mode == "peritem") {
    mode = SimMode::PerItem;
  } else if (!o.mode.empty() && o.mode != "counted") {
    throw InvalidArgument("--mode must be counted or peritem");
  }
  const SimReport rep = run(inst, o.alg, mode, o.materialize, caps);
  if (o.cross_check) {
    const SimMode other = mode == SimMode::Counted ? SimMode::PerItem : SimMode::Counted;
    const SimReport again = run(inst, o.alg, other, o.materialize, caps);
    if (!(again == rep)) {
      std::cerr << "cross-check FAILED: counted and per-item reports differ\n";
      return kInvalid;
    }
    std::cerr << "cross-check: counted and per-item reports identical\n";
  }
  const RatioCheck rc = ratio_check(rep, instance_weight(inst));
  std::cerr << "ratio " << rep.ratio.to_string() << " vs w(U)/2 = " << (rc.weight / Rat(2)).to_string()
            << (rc.at_least_half_weight ? " ok" : " VIOLATED") << "\n";
  if (rep.geometry_failures > 0) {
    std::cerr << rep.geometry_failures << " bins failed geometric validation\n";
  }
  write_output(o.out, dump(to_json(rep)));
  return rep.geometry_failures == 0 ? kOk : kInvalid;
}

int cmd_report(const Options& o) {
  BuildOptions b;
  b.caps = parse_caps(o.caps);
  b.max_attempts = o.max_attempts;
  const auto ds = parse_range(o.range);
  const auto rows = build_report(ds, o.seed, b, o.threads);
  write_output(o.out, report_csv(rows));
  if (!o.out.empty() && o.out != "-") {
    std::string json_path = o.out;
    const auto dot = json_path.rfind('.');
    const auto slash = json_path.rfind('/');
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) json_path.resize(dot);
    write_output(json_path + ".json", dump(report_json(rows, o.seed)));
  }
  return kOk;
}

int verify_family_file(const Json& j, const Caps& caps) {
  const CodeFamily fam = family_from_json(j);
  FamilyCheck check = verify_family(fam);
  for (const auto& c : fam.codes) {
    if (c.is_explicit()) {
      if (c.size.kind != CountKind::Exact || c.size.count != static_cast<unsigned long>(c.words().size())) {
        check.ok = false;
        check.problems.push_back("count of explicit code k=" + std::to_string(c.k) + " is wrong");
      }
      continue;
    }
    Code again = c;
    certify_size(again, Rat(BigInt(10), BigInt(11)), caps);
    if (again.size.count != c.size.count || again.size.kind != c.size.kind ||
        again.certified_threshold != c.certified_threshold) {
      check.ok = false;
      check.problems.push_back("size certificate of code k=" + std::to_string(c.k) + " does not re-derive");
    }
  }
  for (const auto& p : check.problems) std::cerr << "  problem: " << p << "\n";
  std::cerr << "family: " << (check.ok ? "verified" : "FAILED") << "\n";
  return check.ok ? kOk : kInvalid;
}

int verify_packing_file(const Json& j) {
  const EpsilonPacking p = packing_from_json(j);
  bool ok = true;
  if (p.mode == PackingMode::Materialized) {
    const ValidationReport r = validate(p);
    ok = r.valid();
    std::cerr << "packing: " << r.overlaps.size() << " overlaps\n";
  }
  const Weight w = weight(p);
  if (j.contains("weight") && Rat::parse(j.at("weight").get<std::string>()) != w.value) {
    ok = false;
    std::cerr << "packing: stored weight does not match nu\n";
  }
  std::cerr << "packing: " << (ok ? "verified" : "FAILED") << "\n";
  return ok ? kOk : kInvalid;
}

int cmd_verify(const Options& o) {
  const Caps caps = parse_caps(o.caps);
  const std::string text = read_file(o.in);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) throw InvalidArgument("empty file");
  if (text[first] != '{') {
    if (text.compare(first, 2, "d=") == 0) {
      const InstanceStream inst = parse_instance(text);
      const bool ok = write_instance(inst) == text;
      std::cerr << "instance: " << (ok ? "verified (canonical)" : "FAILED (not canonical)") << "\n";
      return ok ? kOk : kInvalid;
    }
    if (text.compare(first, 5, "d,S,c") == 0) {
      std::cerr << "report CSV: header ok\n";
      return kOk;
    }
    throw InvalidArgument("unrecognized file format");
  }
  const Json j = parse_json(text);
  if (j.contains("codes")) return verify_family_file(j, caps);
  if (j.contains("cubes")) return verify_packing_file(j);
  if (j.contains("segments")) {
    const InstanceStream inst = instance_from_json(j);
    std::cerr << "instance: " << inst.segments.size() << " segments, verified\n";
    return kOk;
  }
  if (j.contains("totalBins")) {
    const SimReport r = report_from_json(j);
    const bool ok = r.offline_bound > 0 && r.ratio == Rat(r.total_bins, r.offline_bound);
    std::cerr << "simulation report: " << (ok ? "verified" : "FAILED") << "\n";
    return ok ? kOk : kInvalid;
  }
  if (j.contains("rows")) {
    std::cerr << "report: " << j.at("rows").size() << " rows\n";
    return kOk;
  }
  throw InvalidArgument("unrecognized JSON document");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hypercube epsilon-packings and bounded-space online bin packing adversaries"};
  app.require_subcommand(1);
  Options o;

  auto* family = app.add_subcommand("family", "build and certify a separated family of gapped codes");
  family->add_option("--d", o.d, "dimension")->required();
  family->add_option("--seed", o.seed, "F-set sampling seed");
  family->add_option("--kind", o.kind, "warmup | probabilistic");
  family->add_option("--repr", o.repr, "explicit | implicit (probabilistic only)");
  family->add_option("--max-attempts", o.max_attempts, "F-family samples before giving up");

  auto* pack = app.add_subcommand("pack", "assemble and validate the packing of a family file");
  pack->add_option("--in", o.in, "family JSON")->required();
  pack->add_option("--eps", o.eps, "p/q in (0, 1/d^2]; default 1/d^2");
  pack->add_option("--mode", o.mode, "auto | materialized | counted");

  auto* instance = app.add_subcommand("instance", "adversarial instance from a packing file");
  instance->add_option("--in", o.in, "packing JSON")->required();
  instance->add_option("--M", o.M, "open-bin bound of the targeted algorithm (default 1)");
  instance->add_option("--scale", o.scale, "full | reduced:<t>");

  auto* simulate = app.add_subcommand("simulate", "run an online algorithm on an instance file");
  simulate->add_option("--in", o.in, "instance file")->required();
  simulate->add_option("--alg", o.alg, "algorithm name");
  simulate->add_option("--mode", o.mode, "counted | peritem");
  simulate->add_option("--M", o.M, "declared M (default: the instance's M)");
  simulate->add_flag("--cross-check", o.cross_check, "also run the other mode and compare");
  simulate->add_flag("--materialize", o.materialize, "place cubes and validate each closed bin");

  auto* report = app.add_subcommand("report", "certified weights and central-lemma checks over a d range");
  report->add_option("--range", o.range, "start:stop:step");
  report->add_option("--seed", o.seed, "F-set sampling seed");
  report->add_option("--threads", o.threads, "worker threads (output is order-stable)");
  report->add_option("--max-attempts", o.max_attempts, "F-family samples before giving up");

  auto* verify = app.add_subcommand("verify", "re-check any file emitted by the other commands");
  verify->add_option("--in", o.in, "file to verify")->required();

  for (auto* sub : {family, pack, instance, simulate, report, verify}) {
    sub->add_option("--out", o.out, "output path (default stdout)");
    sub->add_option("--caps", o.caps, "explicit=N,ie=N,peritem=N,validate=N");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*family) return cmd_family(o);
    if (*pack) return cmd_pack(o);
    if (*instance) return cmd_instance(o);
    if (*simulate) return cmd_simulate(o);
    if (*report) return cmd_report(o);
    if (*verify) return cmd_verify(o);
  } catch (const RetriesExhausted& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRetries;
  } catch (const ExactnessRequired& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInexact;
  } catch (const BoundedSpaceViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const cubeadv::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kIo;
  }
  return kUsage;
}
