#include <doctest.h>

#include <string>

#include "lexmix/sha256.h"

using namespace lexmix;

TEST_SUITE_BEGIN("sha256");

TEST_CASE("FIPS 180-4 vectors") {
  CHECK(Sha256::hex("") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(Sha256::hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(Sha256::hex("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq") ==
        "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
}

TEST_CASE("incremental equals one-shot across block boundaries") {
  std::string data;
  for (int i = 0; i < 1000; ++i) data += "chunk-" + std::to_string(i) + "\n";
  Sha256 h;
  size_t pos = 0;
  size_t step = 1;
  while (pos < data.size()) {
    const size_t take = std::min(step, data.size() - pos);
    h.update(data.data() + pos, take);
    pos += take;
    step = step * 3 + 1;
  }
  CHECK(h.finish_hex() == Sha256::hex(data));
}

TEST_SUITE_END();
