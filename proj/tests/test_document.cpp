#include <doctest.h>

#include <string>

#include "lexmix/document.h"
#include "lexmix/errors.h"
#include "lexmix/rng.h"

using namespace lexmix;

TEST_SUITE_BEGIN("document");

TEST_CASE("canonical serialization round-trips") {
  Document d;
  d.id = 42;
  d.lang = "en";
  d.role = Role::hr;
  d.domain = DomainTag::task;
  d.text = "Combine the lamb.";
  const std::string line = serialize_document(d);
  CHECK(line ==
        R"({"domain":"task","id":42,"lang":"en","role":"hr","text":"Combine the lamb."})");
  CHECK(parse_document(line) == d);
  CHECK(serialize_document(parse_document(line)) == line);

  d.domain.reset();
  d.role = Role::lr;
  d.text = "quote \" backslash \\ tab\t";
  const std::string tricky = serialize_document(d);
  CHECK(parse_document(tricky) == d);
}

TEST_CASE("utf-8 text passes through verbatim") {
  Document d;
  d.id = 7;
  d.lang = "de";
  d.role = Role::hr;
  d.text = "\xc3\x9c" "ber Wasser \xe2\x80\x94 \xe4\xb8\xad\xe6\x96\x87";
  const Document back = parse_document(serialize_document(d));
  CHECK(back.text == d.text);
}

TEST_CASE("role and domain parse case-insensitively; missing role defaults hr") {
  const Document a = parse_document(R"({"id":1,"role":"HR","text":"x"})");
  CHECK(a.role == Role::hr);
  const Document b = parse_document(R"({"id":1,"role":"Lr","text":"x"})");
  CHECK(b.role == Role::lr);
  const Document c = parse_document(R"({"id":1,"domain":"Task","text":"x"})");
  CHECK(c.role == Role::hr);
  REQUIRE(c.domain.has_value());
  CHECK(*c.domain == DomainTag::task);
  const Document d = parse_document(R"({"id":1,"domain":"non_task","text":"x"})");
  CHECK(*d.domain == DomainTag::non_task);
}

TEST_CASE("unknown keys tolerated, malformed records rejected") {
  const Document ok = parse_document(R"({"extra":[1,2],"id":9,"text":"y"})");
  CHECK(ok.id == 9);
  CHECK_THROWS_AS(parse_document("not json"), DataError);
  CHECK_THROWS_AS(parse_document("[1,2]"), DataError);
  CHECK_THROWS_AS(parse_document(R"({"text":"missing id"})"), DataError);
  CHECK_THROWS_AS(parse_document(R"({"id":"nan","text":"y"})"), DataError);
  CHECK_THROWS_AS(parse_document(R"({"id":3})"), DataError);
  CHECK_THROWS_AS(parse_document(R"({"id":3,"text":"x","role":"mid"})"), DataError);
  CHECK_THROWS_AS(parse_document(R"({"id":3,"text":"x","domain":"other"})"), DataError);
}

TEST_CASE("64-bit ids survive the round trip") {
  SplitMix64 rng(12);
  for (int i = 0; i < 50; ++i) {
    Document d;
    d.id = rng.next();
    d.text = "t";
    const Document back = parse_document(serialize_document(d));
    CHECK(back.id == d.id);
  }
}

TEST_SUITE_END();
