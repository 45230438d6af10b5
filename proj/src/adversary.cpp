#include "cubeadv/adversary.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "cubeadv/errors.hpp"

namespace cubeadv {

std::string Scale::to_string() const { return full ? "full" : "reduced:" + t.get_str(); }

Scale Scale::parse(std::string_view text) {
  if (text == "full") return Full();
  constexpr std::string_view prefix = "reduced:";
  if (text.substr(0, prefix.size()) == prefix) {
    BigInt t = parse_bigint(text.substr(prefix.size()));
    if (t < 1) throw InvalidArgument("reduced scale needs t >= 1");
    return Reduced(std::move(t));
  }
  if (text == "reduced") return Reduced(1);
  throw InvalidArgument("scale must be 'full' or 'reduced:<t>', got '" + std::string(text) + "'");
}

BigInt InstanceStream::total_items() const {
  BigInt n = 0;
  for (const auto& s : segments) n += s.count;
  return n;
}

BigInt per_class_capacity(int k, int d) {
  if (k < 2) throw InvalidArgument("class k must be >= 2");
  return pow(BigInt(k - 1), static_cast<unsigned long>(d));
}

InstanceStream build_instance(const EpsilonPacking& p, const BigInt& M, const Scale& scale,
                              const Caps& caps) {
  if (M < 1) throw InvalidArgument("M must be >= 1");
  if (!scale.full && scale.t < 1) throw InvalidArgument("reduced scale needs t >= 1");
  for (const auto& [k, c] : p.nu) {
    if (c.kind != CountKind::Exact) {
      throw ExactnessRequired("class " + std::to_string(k) +
                              " carries a lower-bound count; the instance needs exact counts");
    }
  }
  InstanceStream inst;
  inst.d = p.d;
  inst.eps = p.eps;
  inst.M = M;
  BigInt mult = 1;
  for (int k : p.classes()) {
    const BigInt cap = per_class_capacity(k, p.d);
    if (scale.full) {
      mult *= cap;
    } else {
      mpz_lcm(mult.get_mpz_t(), mult.get_mpz_t(), cap.get_mpz_t());
    }
  }
  if (!scale.full) mult *= scale.t;
  inst.multiplier = mult;
  const BigInt copies = 2 * M * mult;
  for (int k : p.classes()) {
    BigInt count = copies * p.nu.at(k).count;
    if (count.get_str().size() > caps.max_decimal_digits) {
      throw CapExceeded("segment count for k=" + std::to_string(k) + " exceeds the decimal size limit");
    }
    inst.segments.push_back({k, std::move(count)});
  }
  return inst;
}

OfflineCertificate offline_bound(const InstanceStream& inst, const EpsilonPacking* source,
                                 const Caps& caps) {
  OfflineCertificate cert;
  cert.bin_count = 2 * inst.M * inst.multiplier;
  if (source == nullptr || source->mode != PackingMode::Materialized) return cert;
  if (inst.total_items() > BigInt(static_cast<unsigned long>(caps.per_item))) return cert;

  // Source cube indices per class.
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < source->cubes.size(); ++i) by_class[source->cubes[i].k].push_back(i);

  const auto nbins = static_cast<std::size_t>(cert.bin_count.get_ui());
  std::vector<std::vector<std::size_t>> bins(nbins);
  bool ok = true;
  for (const auto& seg : inst.segments) {
    const auto& members = by_class[seg.k];
    const auto n = static_cast<std::size_t>(seg.count.get_ui());
    if (members.empty()) {
      ok = false;
      continue;
    }
    // Item j of the segment goes to bin j / nu_k, slot j % nu_k.
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t b = j / members.size();
      if (b >= nbins) {
        ok = false;
        break;
      }
      bins[b].push_back(members[j % members.size()]);
    }
  }

  // Each bin must be a sub-multiset of the source, and the source itself valid.
  const std::size_t ncubes = source->cubes.size();
  for (const auto& bin : bins) {
    std::vector<int> uses(ncubes, 0);
    for (std::size_t idx : bin) {
      if (idx >= ncubes || ++uses[idx] > 1) ok = false;
    }
  }
  ok = ok && validate(*source).valid();
  cert.bins = std::move(bins);
  cert.assignment_valid = ok;
  return cert;
}

BigInt universal_lower_bound(const InstanceStream& inst) {
  Rat total = 0;
  for (const auto& seg : inst.segments) {
    const Rat forced = Rat(seg.count, per_class_capacity(seg.k, inst.d)) - Rat(inst.M);
    if (forced.sign() > 0) total += forced;
  }
  return floor(total);
}

Rat instance_weight(const InstanceStream& inst) {
  const BigInt copies = 2 * inst.M * inst.multiplier;
  Rat w = 0;
  for (const auto& seg : inst.segments) {
    w += Rat(seg.count, copies * per_class_capacity(seg.k, inst.d));
  }
  return w;
}

std::vector<int> expand(const InstanceStream& inst, const Caps& caps) {
  if (inst.total_items() > BigInt(static_cast<unsigned long>(caps.per_item))) {
    throw CapExceeded("instance has " + inst.total_items().get_str() +
                      " items, above the per-item cap " + std::to_string(caps.per_item));
  }
  std::vector<int> items;
  for (const auto& seg : inst.segments) items.insert(items.end(), seg.count.get_ui(), seg.k);
  return items;
}

std::string write_instance(const InstanceStream& inst) {
  std::string out = "d=" + std::to_string(inst.d) + " eps=" + inst.eps.to_string() +
                    " M=" + inst.M.get_str() + " mult=" + inst.multiplier.get_str() + "\n";
  for (const auto& seg : inst.segments) {
    out += std::to_string(seg.k) + " " + seg.count.get_str() + "\n";
  }
  return out;
}

namespace {

std::string_view field(std::string_view token, std::string_view key) {
  if (token.size() <= key.size() + 1 || token.substr(0, key.size()) != key || token[key.size()] != '=') {
    throw InvalidArgument("instance header: expected '" + std::string(key) + "=...', got '" +
                          std::string(token) + "'");
  }
  return token.substr(key.size() + 1);
}

}  // namespace

InstanceStream parse_instance(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("empty instance file");
  std::istringstream head(line);
  std::string td, te, tm, tmult, extra;
  if (!(head >> td >> te >> tm >> tmult) || (head >> extra)) {
    throw InvalidArgument("instance header must be 'd=<int> eps=<p/q> M=<bigint> mult=<bigint>'");
  }
  InstanceStream inst;
  const BigInt d = parse_bigint(field(td, "d"));
  if (d < 1 || d > 1'000'000) throw InvalidArgument("instance dimension out of range");
  inst.d = static_cast<int>(d.get_si());
  inst.eps = Rat::parse(field(te, "eps"));
  inst.M = parse_bigint(field(tm, "M"));
  inst.multiplier = parse_bigint(field(tmult, "mult"));
  if (inst.eps.sign() <= 0 || inst.M < 1 || inst.multiplier < 1) {
    throw InvalidArgument("instance header values out of range");
  }
  int last_k = 1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string tk, tc;
    if (!(row >> tk >> tc) || (row >> extra)) throw InvalidArgument("segment line must be '<k> <count>'");
    const BigInt k = parse_bigint(tk);
    Segment seg{static_cast<int>(k.get_si()), parse_bigint(tc)};
    if (k < 2 || k > 1'000'000 || seg.count < 1) throw InvalidArgument("segment values out of range");
    if (seg.k <= last_k) throw InvalidArgument("segments must be in increasing k");
    last_k = seg.k;
    inst.segments.push_back(std::move(seg));
  }
  return inst;
}

}  // namespace cubeadv
