#include <catch2/catch_amalgamated.hpp>
#include <sstream>

#include "agopnc/io.hpp"
#include "support/helpers.hpp"

using agopnc::Mat;

TEST_CASE("matrix blobs survive a write-read cycle bit for bit") {
  agopnc::Rng rng(2);
  Mat m = testutil::random_matrix(rng, 5, 3);
  m(0, 0) = 1e-300;
  m(1, 1) = -0.0;
  std::stringstream buf(std::ios::in | std::ios::out | std::ios::binary);
  agopnc::write_matrix_le(buf, m);
  Mat back = agopnc::read_matrix_le(buf, 5, 3, "test");
  REQUIRE((back.array() == m.array()).all());

  std::stringstream trunc(std::ios::in | std::ios::out | std::ios::binary);
  agopnc::write_matrix_le(trunc, m.topRows(2));
  REQUIRE_THROWS_AS(agopnc::read_matrix_le(trunc, 5, 3, "test"),
                    std::invalid_argument);
}

TEST_CASE("decimal formatting round-trips doubles at full precision") {
  for (double v : {1.0 / 3.0, 1e-300, 123456789.123456789, -2.5e17,
                   0.1 + 0.2}) {
    const std::string s = agopnc::format_g17(v);
    REQUIRE(std::stod(s) == v);
    REQUIRE(s.find(',') == std::string::npos);
  }
  REQUIRE(agopnc::format_g17(1.0) == "1");
  REQUIRE(agopnc::format_g17(0.5) == "0.5");
}

TEST_CASE("pgm rendering maps the value range onto gray levels") {
  Mat g(2, 2);
  g << 1.0, 0.0, -1.0, 0.5;
  std::stringstream buf(std::ios::in | std::ios::out | std::ios::binary);
  agopnc::write_pgm(buf, g);
  const std::string want = std::string("P5\n2 2\n255\n") +
                           static_cast<char>(255) + static_cast<char>(128) +
                           static_cast<char>(0) + static_cast<char>(191);
  REQUIRE(buf.str() == want);

  // out-of-range values clamp to the endpoints
  Mat wild(1, 2);
  wild << 2.0, -3.0;
  std::stringstream buf2(std::ios::in | std::ios::out | std::ios::binary);
  agopnc::write_pgm(buf2, wild);
  const std::string body = buf2.str().substr(buf2.str().rfind('\n') + 1);
  REQUIRE(body == std::string(1, static_cast<char>(255)) +
                      static_cast<char>(0));
}

TEST_CASE("headerless csv matrices parse and reject ragged input") {
  std::stringstream in("1.5,2\n3,4.25\n");
  Mat m = agopnc::read_csv_matrix(in);
  REQUIRE(m.rows() == 2);
  REQUIRE(m.cols() == 2);
  REQUIRE(m(0, 0) == 1.5);
  REQUIRE(m(1, 1) == 4.25);

  std::stringstream ragged("1,2\n3\n");
  REQUIRE_THROWS_AS(agopnc::read_csv_matrix(ragged), std::invalid_argument);
  std::stringstream garbage("1,zebra\n");
  REQUIRE_THROWS_AS(agopnc::read_csv_matrix(garbage), std::invalid_argument);
  std::stringstream empty("");
  REQUIRE_THROWS_AS(agopnc::read_csv_matrix(empty), std::invalid_argument);
}
