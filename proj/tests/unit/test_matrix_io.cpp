#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>

#include "eei/matrix_io.hpp"

using namespace eei;

TEST(MatrixJson, RoundTrip) {
  Matrix m(2, 2);
  m << 2.0, 0.1, 0.1, 1.0 / 3.0;
  const CovMatrix back = parse_matrix_json(to_matrix_json(m));
  EXPECT_EQ(back.matrix(), m);
}

TEST(MatrixJson, Symmetrizes) {
  const CovMatrix c = parse_matrix_json(R"({"dim":2,"rows":[[1,0.2],[0,1]]})");
  EXPECT_DOUBLE_EQ(c(0, 1), 0.1);
}

TEST(MatrixJson, RejectsMalformed) {
  for (const char* bad :
       {"", "[1]", R"({"dim":2,"rows":[[1,0]]})", R"({"dim":1,"rows":[["a"]]})",
        R"({"dim":0,"rows":[]})", R"({"dim":1,"rows":[[1,2]]})", "{not json"}) {
    try {
      parse_matrix_json(bad);
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kParseError) << bad;
    }
  }
}

TEST(MatrixJson, RejectsIndefinite) {
  try {
    parse_matrix_json(R"({"dim":2,"rows":[[1,2],[2,1]]})");
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotPositiveSemidefinite);
  }
}

TEST(MatrixJson, ReadsFiles) {
  const std::string path = ::testing::TempDir() + "eei_matrix_io.json";
  std::ofstream(path) << R"({"dim":1,"rows":[[4.5]]})";
  EXPECT_DOUBLE_EQ(read_matrix_json(path)(0, 0), 4.5);
  std::remove(path.c_str());
  EXPECT_THROW(read_matrix_json(path), Error);
}
