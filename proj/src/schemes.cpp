#include "pir/schemes.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "pir/errors.hpp"
#include "pir/pairing_graph.hpp"

namespace pir::schemes {

namespace {

// Representative of `value` mod m in {1..m}. Server indices are 1-based
// throughout while query symbols live in {0..m-1}.
uint32_t rep1(int64_t value, uint64_t m) {
  int64_t r = value % int64_t(m);
  if (r <= 0) r += int64_t(m);
  return uint32_t(r);
}

uint64_t checked_pow(uint64_t base, uint32_t exp, const char* what) {
  const auto p = pow_u64(base, exp);
  if (!p) throw ParamError(std::string(what) + ": value overflows");
  return *p;
}

// Symbol modulus for the schemes whose query is a plain symbol vector.
uint64_t symbol_modulus(const SchemeParams& p) {
  switch (p.scheme) {
    case SchemeId::Chor2:
    case SchemeId::Con1: return 2;
    case SchemeId::Con2: return p.record_bits + 1;
    case SchemeId::Con3:
    case SchemeId::Con6: return p.n;
    case SchemeId::Con4: return p.class_count;
    case SchemeId::Con5: break;
  }
  throw ParamError("scheme has no flat symbol modulus");
}

// Con4 server grid: n = t * G merged servers with G = (R/s)/merge groups,
// class-major. Server sid covers class r = class_of(sid) and record blocks
// u in {(g-1)*merge+1 .. g*merge} with g = group_of(sid).
uint64_t con4_groups(const SchemeParams& p) {
  return (p.record_bits / p.block_bits) / p.merge;
}
uint32_t con4_class_of(const SchemeParams& p, uint32_t sid) {
  return uint32_t((sid - 1) / con4_groups(p)) + 1;
}
uint32_t con4_group_of(const SchemeParams& p, uint32_t sid) {
  return uint32_t((sid - 1) % con4_groups(p)) + 1;
}
uint32_t con4_server_id(const SchemeParams& p, uint32_t cls, uint64_t group) {
  return uint32_t((cls - 1) * con4_groups(p) + group);
}

void check_query_shape(const SchemeParams& p, const Query& q) {
  if (q.symbols.size() != query_symbol_count(p)) {
    throw ProtocolError("query has wrong symbol count");
  }
  if (p.scheme == SchemeId::Con5) {
    const uint64_t nk = checked_pow(p.n, p.k, "n^k");
    for (uint64_t v : q.symbols) {
      if (v < 1 || v > nk) throw ProtocolError("query symbol out of range");
    }
    return;
  }
  const uint64_t m = symbol_modulus(p);
  for (uint64_t v : q.symbols) {
    if (v >= m) throw ProtocolError("query symbol out of range");
  }
}

// Lexicographic enumeration of {0..n-1}^k, used by con6 for the shift
// vectors x. rank(x) = sum x_i * n^(k-1-i).
std::vector<std::vector<uint8_t>> enumerate_tuples(uint32_t n, uint32_t k) {
  std::vector<std::vector<uint8_t>> out;
  std::vector<uint8_t> x(k, 0);
  while (true) {
    out.push_back(x);
    size_t i = k;
    while (i > 0 && x[i - 1] == n - 1) x[--i] = 0;
    if (i == 0) break;
    ++x[i - 1];
  }
  return out;
}

// Unranks the idx'th sequence of `count` distinct values from {1..domain},
// mixed radix with the first pick most significant. count = domain unranks a
// permutation.
std::vector<uint64_t> unrank_injection(uint64_t idx, uint64_t domain,
                                       uint64_t count) {
  std::vector<uint64_t> avail(domain);
  std::iota(avail.begin(), avail.end(), 1);
  std::vector<uint64_t> block(count);
  block[count - 1] = 1;
  for (size_t s = count - 1; s > 0; --s) {
    block[s - 1] = block[s] * (domain - s);
  }
  std::vector<uint64_t> out(count);
  for (size_t s = 0; s < count; ++s) {
    const uint64_t d = idx / block[s];
    idx %= block[s];
    out[s] = avail[d];
    avail.erase(avail.begin() + ptrdiff_t(d));
  }
  return out;
}

// First `count` entries of a Fisher-Yates shuffle of {1..domain}: a uniform
// injection into {1..domain} (a uniform bijection when count = domain).
std::vector<uint64_t> sample_injection(Rng& rng, uint64_t domain,
                                       uint64_t count) {
  std::vector<uint64_t> pool(domain);
  std::iota(pool.begin(), pool.end(), 1);
  rng.shuffle(pool);
  pool.resize(count);
  return pool;
}

uint64_t injection_count_checked(uint64_t domain, uint64_t count) {
  uint64_t total = 1;
  for (uint64_t s = 0; s < count; ++s) {
    const uint64_t f = domain - s;
    if (total > UINT64_MAX / f) throw ParamError("randomness space overflow");
    total *= f;
  }
  return total;
}

const std::vector<uint64_t>& field(const Randomness& rnd, size_t idx,
                                   size_t expect_size) {
  if (idx >= rnd.fields.size() || rnd.fields[idx].size() != expect_size) {
    throw ParamError("randomness layout does not match scheme");
  }
  return rnd.fields[idx];
}

}  // namespace

// --- storage -----------------------------------------------------------

std::vector<ServerStorage> encode(const SchemeParams& params,
                                  const Database& db) {
  params.validate();
  if (db.record_count != params.k || db.record_bits != params.record_bits) {
    throw ParamError("database shape does not match scheme parameters");
  }
  std::vector<ServerStorage> out;
  out.reserve(params.n);
  if (params.scheme != SchemeId::Con4) {
    BitString payload;
    for (const BitString& r : db.records) payload.append(r);
    for (uint32_t sid = 1; sid <= params.n; ++sid) {
      out.push_back(ServerStorage{sid, payload});
    }
    return out;
  }
  // Con4: server (class, group) stores records restricted to its block
  // group, record-major.
  const uint64_t s = params.block_bits;
  for (uint32_t sid = 1; sid <= params.n; ++sid) {
    const uint64_t g = con4_group_of(params, sid);
    BitString payload;
    for (uint32_t i = 0; i < params.k; ++i) {
      const uint64_t first_block = (g - 1) * params.merge;
      payload.append(
          db.records[i].slice(first_block * s, uint64_t(params.merge) * s));
    }
    out.push_back(ServerStorage{sid, std::move(payload)});
  }
  return out;
}

// --- sizes -------------------------------------------------------------

uint64_t query_symbol_count(const SchemeParams& p) {
  switch (p.scheme) {
    case SchemeId::Chor2: return p.k;
    case SchemeId::Con1: return uint64_t(p.k) * p.record_bits;
    case SchemeId::Con2:
    case SchemeId::Con3:
    case SchemeId::Con4:
    case SchemeId::Con6: return p.k;
    case SchemeId::Con5:
      return uint64_t(p.k) * checked_pow(p.n, p.k - 1, "n^(k-1)");
  }
  throw ParamError("unknown scheme");
}

uint64_t query_bits(const SchemeParams& p) {
  if (p.scheme == SchemeId::Con5) {
    // Each value is sent as k base-n digits of ceil(log2 n) bits.
    return query_symbol_count(p) * p.k * symbol_width(p.n);
  }
  return query_symbol_count(p) * symbol_width(symbol_modulus(p));
}

uint64_t response_bits(const SchemeParams& p) {
  switch (p.scheme) {
    case SchemeId::Chor2: return p.record_bits;
    case SchemeId::Con1:
    case SchemeId::Con2: return 1;
    case SchemeId::Con3: return p.record_bits / (p.n - 1);
    case SchemeId::Con4:
      return uint64_t(p.merge) * p.block_bits / (p.class_count - 1);
    case SchemeId::Con5: {
      const uint64_t nk = checked_pow(p.n, p.k, "n^k");
      return ((nk - 1) / (p.n - 1)) * (p.record_bits / nk);
    }
    case SchemeId::Con6: {
      const uint64_t nk = checked_pow(p.n, p.k, "n^k");
      return (nk - 1) * (p.record_bits / (nk * (p.n - 1)));
    }
  }
  throw ParamError("unknown scheme");
}

// --- randomness --------------------------------------------------------

std::optional<uint64_t> randomness_space_size(const SchemeParams& p) {
  switch (p.scheme) {
    case SchemeId::Chor2: return pow_u64(2, p.k);
    case SchemeId::Con1: {
      const uint64_t bits = uint64_t(p.k) * p.record_bits;
      if (bits > 63) return std::nullopt;
      return uint64_t(1) << bits;
    }
    case SchemeId::Con2: return pow_u64(p.record_bits + 1, p.k);
    case SchemeId::Con3:
    case SchemeId::Con6: return pow_u64(p.n, p.k);
    case SchemeId::Con4: return pow_u64(p.class_count, p.k);
    case SchemeId::Con5: {
      const auto nk = pow_u64(p.n, p.k);
      if (!nk) return std::nullopt;
      // Any ell yields the same component count.
      const auto graph = build_pairing_graph(p.n, p.k, RecordId{1});
      try {
        const uint64_t inj =
            injection_count_checked(*nk, graph.components.size());
        const uint64_t perm = injection_count_checked(*nk, *nk);
        uint64_t total = perm;
        for (uint32_t i = 0; i + 1 < p.k; ++i) {
          if (inj != 0 && total > UINT64_MAX / inj) return std::nullopt;
          total *= inj;
        }
        return total;
      } catch (const ParamError&) {
        return std::nullopt;
      }
    }
  }
  throw ParamError("unknown scheme");
}

namespace {

std::vector<uint64_t> digits_of(uint64_t index, uint64_t base,
                                uint64_t count) {
  std::vector<uint64_t> out(count, 0);
  for (uint64_t i = count; i > 0; --i) {
    out[i - 1] = index % base;
    index /= base;
  }
  return out;
}

}  // namespace

Randomness randomness_from_index(const SchemeParams& p, RecordId ell,
                                 uint64_t index) {
  p.validate();
  if (ell.value < 1 || ell.value > p.k) throw ParamError("ell out of range");
  Randomness rnd;
  switch (p.scheme) {
    case SchemeId::Chor2:
      rnd.fields.push_back(digits_of(index, 2, p.k));
      return rnd;
    case SchemeId::Con1:
      rnd.fields.push_back(
          digits_of(index, 2, uint64_t(p.k) * p.record_bits));
      return rnd;
    case SchemeId::Con2:
      rnd.fields.push_back(digits_of(index, p.record_bits + 1, p.k));
      return rnd;
    case SchemeId::Con3:
    case SchemeId::Con6:
      rnd.fields.push_back(digits_of(index, p.n, p.k));
      return rnd;
    case SchemeId::Con4:
      rnd.fields.push_back(digits_of(index, p.class_count, p.k));
      return rnd;
    case SchemeId::Con5: {
      const uint64_t nk = checked_pow(p.n, p.k, "n^k");
      const auto graph = build_pairing_graph(p.n, p.k, ell);
      const uint64_t comp_count = graph.components.size();
      const uint64_t inj = injection_count_checked(nk, comp_count);
      const uint64_t perm = injection_count_checked(nk, nk);
      // Mixed radix: one injection digit per i != ell (ascending), then the
      // bijection digit.
      std::vector<uint64_t> digits(p.k, 0);
      digits[p.k - 1] = index % perm;
      index /= perm;
      for (uint32_t pos = p.k - 1; pos > 0; --pos) {
        digits[pos - 1] = index % inj;
        index /= inj;
      }
      for (uint32_t pos = 0; pos + 1 < p.k; ++pos) {
        rnd.fields.push_back(unrank_injection(digits[pos], nk, comp_count));
      }
      rnd.fields.push_back(unrank_injection(digits[p.k - 1], nk, nk));
      return rnd;
    }
  }
  throw ParamError("unknown scheme");
}

Randomness sample_randomness(const SchemeParams& p, RecordId ell, Rng& rng) {
  p.validate();
  if (ell.value < 1 || ell.value > p.k) throw ParamError("ell out of range");
  Randomness rnd;
  switch (p.scheme) {
    case SchemeId::Chor2:
    case SchemeId::Con1:
    case SchemeId::Con2:
    case SchemeId::Con3:
    case SchemeId::Con4:
    case SchemeId::Con6: {
      uint64_t m = p.scheme == SchemeId::Chor2 || p.scheme == SchemeId::Con1
                       ? 2
                       : symbol_modulus(p);
      const uint64_t count = p.scheme == SchemeId::Con1
                                 ? uint64_t(p.k) * p.record_bits
                                 : uint64_t(p.k);
      std::vector<uint64_t> vals(count);
      for (uint64_t& v : vals) v = rng.uniform(m);
      rnd.fields.push_back(std::move(vals));
      return rnd;
    }
    case SchemeId::Con5: {
      const uint64_t nk = checked_pow(p.n, p.k, "n^k");
      const auto graph = build_pairing_graph(p.n, p.k, ell);
      for (uint32_t pos = 0; pos + 1 < p.k; ++pos) {
        rnd.fields.push_back(
            sample_injection(rng, nk, graph.components.size()));
      }
      rnd.fields.push_back(sample_injection(rng, nk, nk));
      return rnd;
    }
  }
  throw ParamError("unknown scheme");
}

// --- query construction --------------------------------------------------

QuerySet queries_from(const SchemeParams& p, RecordId ell,
                      const Randomness& rnd) {
  p.validate();
  if (ell.value < 1 || ell.value > p.k) throw ParamError("ell out of range");
  QuerySet qs;
  qs.user_state = UserState{ell, rnd};
  qs.per_server.resize(p.n);

  switch (p.scheme) {
    case SchemeId::Chor2: {
      const auto& alpha = field(rnd, 0, p.k);
      Query q1{alpha};
      Query q2{alpha};
      q2.symbols[ell.value - 1] ^= 1;
      qs.per_server[0] = std::move(q1);
      qs.per_server[1] = std::move(q2);
      return qs;
    }
    case SchemeId::Con1: {
      const auto& alpha = field(rnd, 0, uint64_t(p.k) * p.record_bits);
      for (uint32_t r = 1; r + 1 <= p.n; ++r) {
        Query q{alpha};
        q.symbols[(ell.value - 1) * p.record_bits + (r - 1)] ^= 1;
        qs.per_server[r - 1] = std::move(q);
      }
      qs.per_server[p.n - 1] = Query{alpha};
      return qs;
    }
    case SchemeId::Con2:
    case SchemeId::Con3:
    case SchemeId::Con6: {
      const uint64_t m = symbol_modulus(p);
      const auto& a = field(rnd, 0, p.k);
      for (uint32_t r = 1; r <= p.n; ++r) {
        Query q{a};
        q.symbols[ell.value - 1] = (a[ell.value - 1] + r) % m;
        qs.per_server[r - 1] = std::move(q);
      }
      return qs;
    }
    case SchemeId::Con4: {
      const uint64_t t = p.class_count;
      const auto& a = field(rnd, 0, p.k);
      std::vector<Query> per_class(t);
      for (uint32_t r = 1; r <= t; ++r) {
        Query q{a};
        q.symbols[ell.value - 1] = (a[ell.value - 1] + r) % t;
        per_class[r - 1] = std::move(q);
      }
      for (uint32_t sid = 1; sid <= p.n; ++sid) {
        qs.per_server[sid - 1] = per_class[con4_class_of(p, sid) - 1];
      }
      return qs;
    }
    case SchemeId::Con5: {
      const auto graph = build_pairing_graph(p.n, p.k, ell);
      const uint64_t nk = checked_pow(p.n, p.k, "n^k");
      // Per-field shape check.
      for (uint32_t pos = 0; pos + 1 < p.k; ++pos) {
        field(rnd, pos, graph.components.size());
      }
      const auto& psi = field(rnd, p.k - 1, nk);
      std::map<PairVertex, size_t> comp_of;
      for (size_t c = 0; c < graph.components.size(); ++c) {
        for (const PairVertex& v : graph.components[c].members) {
          comp_of[v] = c;
        }
      }
      for (uint32_t r = 1; r <= p.n; ++r) {
        Query q;
        q.symbols.reserve(query_symbol_count(p));
        for (uint32_t i = 1; i <= p.k; ++i) {
          for (const SelectorVec& sel : graph.selectors) {
            if (sel[i - 1] == 0) continue;
            const PairVertex v{r, sel};
            if (i == ell.value) {
              q.symbols.push_back(psi[graph.part1_index(v)]);
            } else {
              const size_t fpos = i < ell.value ? i - 1 : i - 2;
              q.symbols.push_back(rnd.fields[fpos][comp_of.at(v)]);
            }
          }
        }
        qs.per_server[r - 1] = std::move(q);
      }
      return qs;
    }
  }
  throw ParamError("unknown scheme");
}

QuerySet gen_query(const SchemeParams& p, RecordId ell, Rng& rng) {
  return queries_from(p, ell, sample_randomness(p, ell, rng));
}

// --- serialization -------------------------------------------------------

BitString serialize_query(const SchemeParams& p, const Query& q) {
  check_query_shape(p, q);
  if (p.scheme == SchemeId::Con5) {
    // value - 1 written as k big-endian base-n digits.
    std::vector<uint64_t> digits;
    digits.reserve(q.symbols.size() * p.k);
    for (uint64_t v : q.symbols) {
      uint64_t x = v - 1;
      std::vector<uint64_t> d(p.k, 0);
      for (uint32_t i = p.k; i > 0; --i) {
        d[i - 1] = x % p.n;
        x /= p.n;
      }
      digits.insert(digits.end(), d.begin(), d.end());
    }
    return pack_symbols(digits, p.n);
  }
  return pack_symbols(q.symbols, symbol_modulus(p));
}

Query deserialize_query(const SchemeParams& p, const BitString& bits) {
  try {
    if (p.scheme == SchemeId::Con5) {
      const uint64_t count = query_symbol_count(p);
      const auto digits = unpack_symbols(bits, p.n, count * p.k);
      Query q;
      q.symbols.reserve(count);
      for (uint64_t i = 0; i < count; ++i) {
        uint64_t v = 0;
        for (uint32_t d = 0; d < p.k; ++d) {
          v = v * p.n + digits[i * p.k + d];
        }
        q.symbols.push_back(v + 1);
      }
      return q;
    }
    Query q;
    q.symbols =
        unpack_symbols(bits, symbol_modulus(p), query_symbol_count(p));
    return q;
  } catch (const ParamError& e) {
    throw ProtocolError(std::string("malformed query: ") + e.what());
  }
}

bool query_is_all_zero(const Query& q) {
  return std::all_of(q.symbols.begin(), q.symbols.end(),
                     [](uint64_t v) { return v == 0; });
}

bool omission_allowed(const SchemeParams& p, const Query& q) {
  return (p.scheme == SchemeId::Con1 || p.scheme == SchemeId::Con3) &&
         query_is_all_zero(q);
}

// --- server answer -------------------------------------------------------

ResponsePayload answer(const SchemeParams& p, const ServerStorage& storage,
                       const Query& q, bool skip_zero) {
  p.validate();
  check_query_shape(p, q);
  if (storage.server_id < 1 || storage.server_id > p.n) {
    throw ProtocolError("server id out of range");
  }
  const uint64_t R = p.record_bits;
  ResponsePayload resp;
  resp.server_id = storage.server_id;

  if (skip_zero && omission_allowed(p, q)) {
    return resp;  // legal omission: empty payload
  }

  switch (p.scheme) {
    case SchemeId::Chor2: {
      BitString acc(R);
      for (uint32_t i = 0; i < p.k; ++i) {
        if (q.symbols[i]) acc ^= storage.payload.slice(uint64_t(i) * R, R);
      }
      resp.bits = std::move(acc);
      return resp;
    }
    case SchemeId::Con1: {
      bool bit = false;
      for (uint64_t c = 0; c < uint64_t(p.k) * R; ++c) {
        if (q.symbols[c]) bit ^= storage.payload.bit(c);
      }
      resp.bits = BitString(1);
      resp.bits.set_bit(0, bit);
      return resp;
    }
    case SchemeId::Con2: {
      bool bit = false;
      for (uint32_t i = 0; i < p.k; ++i) {
        const uint64_t b = q.symbols[i];
        if (b != 0) bit ^= storage.payload.bit(uint64_t(i) * R + (b - 1));
      }
      resp.bits = BitString(1);
      resp.bits.set_bit(0, bit);
      return resp;
    }
    case SchemeId::Con3: {
      const uint64_t blk = R / (p.n - 1);
      BitString acc(blk);
      for (uint32_t i = 0; i < p.k; ++i) {
        const uint64_t b = q.symbols[i];
        if (b != 0) {
          acc ^= storage.payload.slice(uint64_t(i) * R + (b - 1) * blk, blk);
        }
      }
      resp.bits = std::move(acc);
      return resp;
    }
    case SchemeId::Con4: {
      const uint64_t s = p.block_bits;
      const uint64_t sub = s / (p.class_count - 1);
      BitString out;
      for (uint32_t u_local = 0; u_local < p.merge; ++u_local) {
        BitString acc(sub);
        for (uint32_t i = 0; i < p.k; ++i) {
          const uint64_t b = q.symbols[i];
          if (b != 0) {
            const uint64_t off =
                (uint64_t(i) * p.merge + u_local) * s + (b - 1) * sub;
            acc ^= storage.payload.slice(off, sub);
          }
        }
        out.append(acc);
      }
      resp.bits = std::move(out);
      return resp;
    }
    case SchemeId::Con5: {
      const uint64_t nk = checked_pow(p.n, p.k, "n^k");
      const uint64_t blk = R / nk;
      const auto selectors = enumerate_selectors(p.n, p.k);
      // Rebuild the full value table from the nonzero symbols: position
      // (i, sel) carries a value exactly when sel[i-1] != 0.
      std::vector<std::vector<uint64_t>> table(
          p.k, std::vector<uint64_t>(selectors.size(), 0));
      size_t next = 0;
      for (uint32_t i = 0; i < p.k; ++i) {
        for (size_t vi = 0; vi < selectors.size(); ++vi) {
          if (selectors[vi][i] != 0) table[i][vi] = q.symbols[next++];
        }
      }
      BitString out;
      for (size_t vi = 0; vi < selectors.size(); ++vi) {
        BitString acc(blk);
        for (uint32_t i = 0; i < p.k; ++i) {
          const uint64_t b = table[i][vi];
          if (b != 0) {
            acc ^= storage.payload.slice(uint64_t(i) * R + (b - 1) * blk, blk);
          }
        }
        out.append(acc);
      }
      resp.bits = std::move(out);
      return resp;
    }
    case SchemeId::Con6: {
      const uint64_t nk = checked_pow(p.n, p.k, "n^k");
      const uint64_t blk = R / (nk * (p.n - 1));
      const auto tuples = enumerate_tuples(p.n, p.k);
      BitString out;
      for (const auto& x : tuples) {
        bool cancels = true;
        for (uint32_t i = 0; i < p.k; ++i) {
          if ((q.symbols[i] + x[i]) % p.n != 0) {
            cancels = false;
            break;
          }
        }
        if (cancels) continue;  // the all-zero combination is not sent
        BitString acc(blk);
        uint64_t xrank = 0;
        for (uint32_t i = 0; i < p.k; ++i) xrank = xrank * p.n + x[i];
        for (uint32_t i = 0; i < p.k; ++i) {
          const uint64_t b = (q.symbols[i] + x[i]) % p.n;
          if (b != 0) {
            const uint64_t block_pos = (b - 1) * nk + xrank;
            acc ^= storage.payload.slice(uint64_t(i) * R + block_pos * blk,
                                         blk);
          }
        }
        out.append(acc);
      }
      resp.bits = std::move(out);
      return resp;
    }
  }
  throw ParamError("unknown scheme");
}

// --- reconstruction ------------------------------------------------------

namespace {

// Orders responses by server id and substitutes zero strings for legal
// omissions; anything else malformed is a protocol error.
std::vector<BitString> normalize_responses(
    const SchemeParams& p, const QuerySet& qs,
    const std::vector<ResponsePayload>& responses) {
  if (responses.size() != p.n) {
    throw ProtocolError("expected one response per server");
  }
  std::vector<const ResponsePayload*> by_server(p.n, nullptr);
  for (const auto& r : responses) {
    if (r.server_id < 1 || r.server_id > p.n ||
        by_server[r.server_id - 1] != nullptr) {
      throw ProtocolError("responses must cover each server exactly once");
    }
    by_server[r.server_id - 1] = &r;
  }
  const uint64_t full = response_bits(p);
  std::vector<BitString> out(p.n);
  for (uint32_t sid = 1; sid <= p.n; ++sid) {
    const ResponsePayload& r = *by_server[sid - 1];
    if (r.bits.size() == full) {
      out[sid - 1] = r.bits;
    } else if (r.bits.empty() &&
               omission_allowed(p, qs.per_server[sid - 1])) {
      out[sid - 1] = BitString(full);
    } else {
      throw ProtocolError("server " + std::to_string(sid) +
                          " response has illegal length");
    }
  }
  return out;
}

}  // namespace

BitString reconstruct(const SchemeParams& p, const UserState& state,
                      const std::vector<ResponsePayload>& responses) {
  p.validate();
  const RecordId ell = state.ell;
  const QuerySet qs = queries_from(p, ell, state.rnd);
  const std::vector<BitString> c = normalize_responses(p, qs, responses);
  const uint64_t R = p.record_bits;

  switch (p.scheme) {
    case SchemeId::Chor2:
      return c[0] ^ c[1];
    case SchemeId::Con1: {
      BitString out(R);
      for (uint64_t r = 1; r <= R; ++r) {
        out.set_bit(r - 1, c[r - 1].bit(0) ^ c[p.n - 1].bit(0));
      }
      return out;
    }
    case SchemeId::Con2: {
      const uint64_t m = R + 1;
      const int64_t a = int64_t(state.rnd.fields[0][ell.value - 1]);
      const uint32_t r = rep1(-a, m);
      BitString out(R);
      for (uint64_t j = 1; j <= R; ++j) {
        const uint32_t rp = rep1(int64_t(j) - a, m);
        out.set_bit(j - 1, c[r - 1].bit(0) ^ c[rp - 1].bit(0));
      }
      return out;
    }
    case SchemeId::Con3: {
      const uint64_t blk = R / (p.n - 1);
      const int64_t a = int64_t(state.rnd.fields[0][ell.value - 1]);
      const uint32_t r = rep1(-a, p.n);
      BitString out;
      for (uint64_t j = 1; j <= p.n - 1; ++j) {
        const uint32_t rp = rep1(int64_t(j) - a, p.n);
        out.append(c[r - 1].slice(0, blk) ^ c[rp - 1].slice(0, blk));
      }
      return out;
    }
    case SchemeId::Con4: {
      const uint64_t s = p.block_bits;
      const uint64_t t = p.class_count;
      const uint64_t sub = s / (t - 1);
      const uint64_t blocks = R / s;
      const int64_t a = int64_t(state.rnd.fields[0][ell.value - 1]);
      const uint32_t r = rep1(-a, t);
      BitString out;
      for (uint64_t u = 1; u <= blocks; ++u) {
        const uint64_t g = (u - 1) / p.merge + 1;
        const uint64_t u_local = (u - 1) % p.merge;
        for (uint64_t j = 1; j <= t - 1; ++j) {
          const uint32_t rp = rep1(int64_t(j) - a, t);
          const uint32_t sid_r = con4_server_id(p, r, g);
          const uint32_t sid_rp = con4_server_id(p, rp, g);
          out.append(c[sid_r - 1].slice(u_local * sub, sub) ^
                     c[sid_rp - 1].slice(u_local * sub, sub));
        }
      }
      return out;
    }
    case SchemeId::Con5: {
      const uint64_t nk = checked_pow(p.n, p.k, "n^k");
      const uint64_t blk = R / nk;
      const auto graph = build_pairing_graph(p.n, p.k, ell);
      const auto& psi = field(state.rnd, p.k - 1, nk);
      std::vector<size_t> inverse(nk);  // block index -> part1 position
      for (size_t pos = 0; pos < nk; ++pos) inverse[psi[pos] - 1] = pos;
      const auto string_at = [&](const PairVertex& v) {
        return c[v.server - 1].slice(graph.selector_index(v.sel) * blk, blk);
      };
      BitString out;
      for (uint64_t j = 1; j <= nk; ++j) {
        const PairVertex& v = graph.part1[inverse[j - 1]];
        const auto& comp = graph.components[graph.component_of(v)];
        BitString block = string_at(v);
        if (comp.center.has_value()) block ^= string_at(*comp.center);
        out.append(block);
      }
      return out;
    }
    case SchemeId::Con6: {
      const uint64_t nk = checked_pow(p.n, p.k, "n^k");
      const uint64_t blk = R / (nk * (p.n - 1));
      const auto tuples = enumerate_tuples(p.n, p.k);
      const auto& a = state.rnd.fields[0];
      // Position of x in server r's concatenated reply: lexicographic rank,
      // minus one past the omitted all-cancelling shift.
      const auto string_at = [&](uint32_t r, uint64_t xrank,
                                 uint64_t omit_rank) {
        if (xrank == omit_rank) return BitString(blk);
        const uint64_t pos = xrank > omit_rank ? xrank - 1 : xrank;
        return c[r - 1].slice(pos * blk, blk);
      };
      std::vector<uint64_t> omit_rank(p.n);
      for (uint32_t r = 1; r <= p.n; ++r) {
        uint64_t rank = 0;
        for (uint32_t i = 0; i < p.k; ++i) {
          const uint64_t b =
              i + 1 == ell.value ? (a[i] + r) % p.n : a[i] % p.n;
          rank = rank * p.n + (p.n - b) % p.n;  // x_i with x_i + b_i = 0
        }
        omit_rank[r - 1] = rank;
      }
      const int64_t al = int64_t(a[ell.value - 1]);
      BitString out;
      for (uint64_t j = 1; j <= p.n - 1; ++j) {
        for (const auto& x : tuples) {
          uint64_t xrank = 0;
          for (uint32_t i = 0; i < p.k; ++i) xrank = xrank * p.n + x[i];
          const int64_t xl = int64_t(x[ell.value - 1]);
          const uint32_t r = rep1(-al - xl, p.n);
          const uint32_t rp = rep1(int64_t(j) - al - xl, p.n);
          out.append(string_at(r, xrank, omit_rank[r - 1]) ^
                     string_at(rp, xrank, omit_rank[rp - 1]));
        }
      }
      return out;
    }
  }
  throw ParamError("unknown scheme");
}

// --- profile -------------------------------------------------------------

SchemeProfile profile(const SchemeParams& p) {
  p.validate();
  SchemeProfile prof;
  prof.upload_bits = uint64_t(p.n) * query_bits(p);
  prof.worst_download_bits = uint64_t(p.n) * response_bits(p);
  prof.per_server_storage_bits =
      p.scheme == SchemeId::Con4
          ? uint64_t(p.k) * p.block_bits * p.merge
          : uint64_t(p.k) * p.record_bits;
  prof.total_storage_bits = uint64_t(p.n) * prof.per_server_storage_bits;

  switch (p.scheme) {
    case SchemeId::Con1: {
      // Skip-zero operation: one server goes silent for R+1 of the 2^(kR)
      // coefficient arrays, so the mean is (R+1)(1 - 2^-kR).
      BigInt space = boost::multiprecision::pow(
          BigInt(2), unsigned(p.k * p.record_bits));
      prof.expected_download_bits =
          Rational(BigInt(p.record_bits + 1) * (space - 1), space);
      break;
    }
    case SchemeId::Con3: {
      // Each server's selector vector is all-zero with probability n^-k.
      BigInt space = boost::multiprecision::pow(BigInt(p.n), unsigned(p.k));
      prof.expected_download_bits =
          Rational(BigInt(prof.worst_download_bits) * (space - 1), space);
      break;
    }
    default:
      prof.expected_download_bits = Rational(prof.worst_download_bits);
      break;
  }
  return prof;
}

}  // namespace pir::schemes
