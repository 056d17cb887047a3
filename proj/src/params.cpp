#include "pir/params.hpp"

#include <sstream>

#include "pir/errors.hpp"

namespace pir {

std::string_view scheme_name(SchemeId scheme) {
  switch (scheme) {
    case SchemeId::Chor2: return "chor2";
    case SchemeId::Con1: return "con1";
    case SchemeId::Con2: return "con2";
    case SchemeId::Con3: return "con3";
    case SchemeId::Con4: return "con4";
    case SchemeId::Con5: return "con5";
    case SchemeId::Con6: return "con6";
  }
  throw ParamError("unknown scheme id");
}

SchemeId scheme_from_name(std::string_view name) {
  for (SchemeId s : {SchemeId::Chor2, SchemeId::Con1, SchemeId::Con2,
                     SchemeId::Con3, SchemeId::Con4, SchemeId::Con5,
                     SchemeId::Con6}) {
    if (name == scheme_name(s)) return s;
  }
  throw ParamError("unknown scheme name: " + std::string(name));
}

std::optional<uint64_t> pow_u64(uint64_t base, uint32_t exp) {
  uint64_t result = 1;
  for (uint32_t i = 0; i < exp; ++i) {
    if (base != 0 && result > UINT64_MAX / base) return std::nullopt;
    result *= base;
  }
  return result;
}

SchemeParams SchemeParams::chor2(uint32_t k, uint64_t record_bits) {
  return make(SchemeId::Chor2, 0, k, record_bits);
}
SchemeParams SchemeParams::con1(uint32_t k, uint64_t record_bits) {
  return make(SchemeId::Con1, 0, k, record_bits);
}
SchemeParams SchemeParams::con2(uint32_t k, uint64_t record_bits) {
  return make(SchemeId::Con2, 0, k, record_bits);
}
SchemeParams SchemeParams::con3(uint32_t n, uint32_t k, uint64_t record_bits) {
  return make(SchemeId::Con3, n, k, record_bits);
}
SchemeParams SchemeParams::con4(uint32_t k, uint64_t record_bits,
                                uint64_t block_bits, uint32_t class_count,
                                uint32_t merge) {
  return make(SchemeId::Con4, 0, k, record_bits, block_bits, class_count,
              merge);
}
SchemeParams SchemeParams::con5(uint32_t n, uint32_t k, uint64_t record_bits) {
  return make(SchemeId::Con5, n, k, record_bits);
}
SchemeParams SchemeParams::con6(uint32_t n, uint32_t k, uint64_t record_bits) {
  return make(SchemeId::Con6, n, k, record_bits);
}

SchemeParams SchemeParams::make(SchemeId scheme, uint32_t n, uint32_t k,
                                uint64_t record_bits, uint64_t block_bits,
                                uint32_t class_count, uint32_t merge) {
  SchemeParams p;
  p.scheme = scheme;
  p.n = n;
  p.k = k;
  p.record_bits = record_bits;
  p.block_bits = block_bits;
  p.class_count = class_count;
  p.merge = merge;

  // Derive n where the scheme determines it.
  switch (scheme) {
    case SchemeId::Chor2:
      if (p.n == 0) p.n = 2;
      break;
    case SchemeId::Con1:
    case SchemeId::Con2:
      if (record_bits + 1 > UINT32_MAX) {
        throw ParamError("record length too large for an R+1 server scheme");
      }
      if (p.n == 0) p.n = uint32_t(record_bits + 1);
      break;
    case SchemeId::Con4:
      if (block_bits >= 1 && block_bits <= record_bits &&
          record_bits % block_bits == 0 && merge >= 1 &&
          (record_bits / block_bits) % merge == 0) {
        const uint64_t derived =
            uint64_t(class_count) * (record_bits / block_bits) / merge;
        if (derived <= UINT32_MAX && p.n == 0) p.n = uint32_t(derived);
      }
      break;
    default:
      break;
  }
  p.validate();
  return p;
}

void SchemeParams::validate() const {
  if (k < 1) throw ParamError("k must be at least 1");
  if (record_bits < 1) throw ParamError("R must be at least 1");

  switch (scheme) {
    case SchemeId::Chor2:
      if (n != 2) throw ParamError("chor2 requires n = 2");
      break;
    case SchemeId::Con1:
    case SchemeId::Con2:
      if (uint64_t(n) != record_bits + 1) {
        throw ParamError("con1/con2 require n = R + 1");
      }
      break;
    case SchemeId::Con3:
      if (n < 2) throw ParamError("con3 requires n >= 2");
      if (record_bits % (n - 1) != 0) {
        throw ParamError("con3 requires (n - 1) | R");
      }
      break;
    case SchemeId::Con4: {
      if (class_count < 2) throw ParamError("con4 requires t >= 2");
      if (block_bits < 1 || record_bits % block_bits != 0) {
        throw ParamError("con4 requires s | R");
      }
      if (block_bits % (class_count - 1) != 0) {
        throw ParamError("con4 requires (t - 1) | s");
      }
      const uint64_t blocks = record_bits / block_bits;
      if (merge < 1 || blocks % merge != 0) {
        throw ParamError("con4 requires merge | (R / s)");
      }
      if (uint64_t(n) != uint64_t(class_count) * blocks / merge) {
        throw ParamError("con4 requires n = t * (R/s) / merge");
      }
      break;
    }
    case SchemeId::Con5: {
      if (n < 2) throw ParamError("con5 requires n >= 2");
      const auto nk = pow_u64(n, k);
      if (!nk || record_bits % *nk != 0) {
        throw ParamError("con5 requires n^k | R");
      }
      break;
    }
    case SchemeId::Con6: {
      if (n < 2) throw ParamError("con6 requires n >= 2");
      const auto nk = pow_u64(n, k);
      if (!nk || *nk > UINT64_MAX / (n - 1) ||
          record_bits % (*nk * (n - 1)) != 0) {
        throw ParamError("con6 requires n^k * (n - 1) | R");
      }
      break;
    }
  }
}

std::string SchemeParams::describe() const {
  std::ostringstream os;
  os << scheme_name(scheme) << " n=" << n << " k=" << k
     << " R=" << record_bits;
  if (scheme == SchemeId::Con4) {
    os << " s=" << block_bits << " t=" << class_count << " merge=" << merge;
  }
  return os.str();
}

}  // namespace pir
