#include "pir/params.hpp"

#include "doctest.h"
#include "pir/errors.hpp"

using namespace pir;

TEST_CASE("scheme names round-trip") {
  for (SchemeId s : {SchemeId::Chor2, SchemeId::Con1, SchemeId::Con2,
                     SchemeId::Con3, SchemeId::Con4, SchemeId::Con5,
                     SchemeId::Con6}) {
    CHECK(scheme_from_name(scheme_name(s)) == s);
  }
  CHECK_THROWS_AS(scheme_from_name("con9"), ParamError);
}

TEST_CASE("server counts are derived or checked") {
  CHECK(SchemeParams::chor2(3, 5).n == 2);
  CHECK(SchemeParams::con1(2, 4).n == 5);
  CHECK(SchemeParams::con2(2, 4).n == 5);
  CHECK(SchemeParams::con4(2, 4, 2, 3).n == 6);
  CHECK(SchemeParams::con4(2, 4, 2, 3, 2).n == 3);
  CHECK_THROWS_AS(SchemeParams::make(SchemeId::Con1, 4, 2, 4), ParamError);
}

TEST_CASE("divisibility constraints") {
  CHECK_NOTHROW(SchemeParams::con3(3, 2, 6).validate());
  CHECK_THROWS_AS(SchemeParams::con3(3, 2, 5), ParamError);
  CHECK_THROWS_AS(SchemeParams::con3(1, 2, 4), ParamError);

  CHECK_NOTHROW(SchemeParams::con4(2, 12, 4, 3).validate());
  CHECK_THROWS_AS(SchemeParams::con4(2, 12, 5, 3), ParamError);   // s | R
  CHECK_THROWS_AS(SchemeParams::con4(2, 12, 4, 4), ParamError);   // (t-1) | s
  CHECK_THROWS_AS(SchemeParams::con4(2, 12, 4, 3, 2), ParamError);  // merge

  CHECK_NOTHROW(SchemeParams::con5(2, 2, 8).validate());
  CHECK_THROWS_AS(SchemeParams::con5(2, 2, 6), ParamError);
  CHECK_NOTHROW(SchemeParams::con6(2, 2, 8).validate());
  CHECK_THROWS_AS(SchemeParams::con6(3, 2, 9), ParamError);  // needs 18 | R

  CHECK_THROWS_AS(SchemeParams::chor2(0, 1), ParamError);
  CHECK_THROWS_AS(SchemeParams::chor2(1, 0), ParamError);
}
