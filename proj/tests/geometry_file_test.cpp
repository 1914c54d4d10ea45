#include <gtest/gtest.h>

#include <string>

#include "spinlie/geometry_file.hpp"

using namespace spinlie;

namespace {

const char* kHeader = R"(dim = 2
signature = [1, 1]
coords = [t, x]
)";

std::string withHeader(const std::string& body) { return kHeader + body; }

/// Message of the InputError thrown by parseGeometry, or "" if none.
std::string errorOf(const std::string& text) {
  try {
    parseGeometry(text);
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(GeometryFile, FullDocument) {
  const GeometrySpec spec = parseGeometry(withHeader(R"(
# comment line
[metric]
"1 + t^2", "t*x"     # trailing comment
"-1"

[vector_field xi]
components = ["x", "t"]

[spinor_field psi]
re = ["1", "t"]
im = [0, "x"]

[density_field rho]
rank = [1, 1]
weight = -0.5
components = ["1", "0", "0", "t"]
)"));
  EXPECT_EQ(spec.sig, (Signature{1, 1}));
  EXPECT_EQ((*spec.coordNames)[1], "x");
  EXPECT_TRUE(structurallyEqual(spec.metricEntry(1, 0), spec.metricEntry(0, 1)));
  EXPECT_EQ(spec.vectorField("xi").components.size(), 2u);
  EXPECT_EQ(spec.spinorField("psi").im.size(), 2u);
  const auto& rho = spec.densityField("rho");
  EXPECT_EQ(rho.upper, 1);
  EXPECT_EQ(rho.lower, 1);
  EXPECT_EQ(rho.weight, -0.5);
  EXPECT_EQ(spec.domain[0], std::make_pair(-1.0, 1.0));
}

TEST(GeometryFile, FullSymmetricRowsAccepted) {
  const GeometrySpec spec = parseGeometry(withHeader("[metric]\n\"1\", \"t\"\n\"t\", \"-1\"\n"));
  EXPECT_EQ(evalValue(spec.metricEntry(1, 0), Eigen::Vector2d(0.5, 0.0)), 0.5);
}

TEST(GeometryFile, AsymmetricFullRowsRejected) {
  EXPECT_NE(errorOf(withHeader("[metric]\n\"1\", \"t\"\n\"x\", \"-1\"\n")).find("symmetric"),
            std::string::npos);
}

TEST(GeometryFile, DomainKey) {
  const GeometrySpec spec =
      parseGeometry(withHeader("domain = [[0, 2], [-3, 3]]\n[metric]\n\"1\", \"0\"\n\"-1\"\n"));
  EXPECT_EQ(spec.domain[0], std::make_pair(0.0, 2.0));
  EXPECT_EQ(spec.domain[1], std::make_pair(-3.0, 3.0));
  EXPECT_FALSE(errorOf(withHeader("domain = [[2, 0], [-3, 3]]\n[metric]\n\"1\", \"0\"\n\"-1\"\n")).empty());
}

TEST(GeometryFile, DuplicateNamesRejected) {
  const std::string text = withHeader(R"([metric]
"1", "0"
"-1"
[vector_field xi]
components = ["1", "0"]
[spinor_field xi]
re = ["1", "0"]
im = ["0", "0"]
)");
  EXPECT_NE(errorOf(text).find("duplicate field name 'xi'"), std::string::npos) << errorOf(text);
}

TEST(GeometryFile, ErrorsCarryLineNumbers) {
  // malformed expression on line 5: ParseError with an offset
  const std::string text = withHeader("[metric]\n\"1 +\", \"0\"\n\"-1\"\n");
  try {
    parseGeometry(text);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 5"), std::string::npos) << e.what();
    EXPECT_EQ(e.offset(), 3u);
  }
  EXPECT_NE(errorOf(withHeader("[metric]\n\"1\", \"0\"\n\"-1\"\n[vector_field v]\ncomponents = [\"1\"]\n"))
                .find("line 8"),
            std::string::npos);
}

TEST(GeometryFile, MalformedDocuments) {
  const std::string metric = "[metric]\n\"1\", \"0\"\n\"-1\"\n";
  EXPECT_FALSE(errorOf(metric).empty());                                        // no header
  EXPECT_FALSE(errorOf(withHeader("")).empty());                                // no metric
  EXPECT_FALSE(errorOf(withHeader("[metric]\n\"1\", \"0\"\n")).empty());       // missing row
  EXPECT_FALSE(errorOf(withHeader("[metric]\n\"1\"\n\"-1\"\n")).empty());       // short row
  EXPECT_FALSE(errorOf(withHeader(metric + metric)).empty());                   // two metrics
  EXPECT_FALSE(errorOf(withHeader("colour = [1]\n" + metric)).empty());         // unknown key
  EXPECT_FALSE(errorOf(withHeader(metric + "[tensor t]\n")).empty());           // unknown section
  EXPECT_FALSE(errorOf(withHeader(metric + "[vector_field]\n")).empty());       // nameless
  EXPECT_FALSE(errorOf(withHeader(metric + "[vector_field v]\nfoo = 1\n")).empty());
  EXPECT_FALSE(errorOf(withHeader(metric + "[vector_field v]\n")).empty());     // no components
  EXPECT_FALSE(errorOf(withHeader("[metric]\n\"1\", \"0\"\n\"y\"\n")).empty()); // unknown name
  EXPECT_FALSE(errorOf(withHeader("[metric]\n1, 0\nminus\n")).empty());         // bare word
  EXPECT_FALSE(errorOf("dim = 2\nsignature = [2, 1]\ncoords = [a, b]\n" + metric).empty());
  EXPECT_FALSE(errorOf(withHeader(metric + "[density_field d]\nrank = [0, 0]\ncomponents = [\"1\", \"2\"]\n")).empty());
  EXPECT_FALSE(errorOf(withHeader(metric + "[spinor_field s]\nre = [\"1\", \"0\"]\n")).empty());
}

TEST(GeometryFile, BareNumbersAreExpressions) {
  const GeometrySpec spec = parseGeometry(withHeader("[metric]\n1, 0\n-1\n"));
  EXPECT_EQ(evalValue(spec.metricEntry(1, 1), Eigen::Vector2d(0, 0)), -1.0);
}

TEST(GeometryFile, LoadMissingFile) {
  EXPECT_THROW(loadGeometry("/nonexistent/path.geom"), InputError);
}

TEST(GeometryFile, ShippedExamplesLoad) {
  for (const char* name : {"flat2d.geom", "polar.geom", "minkowski2.geom", "schwarzschild.geom"}) {
    const GeometrySpec spec = loadGeometry(std::string(SPINLIE_DATA_DIR) + "/" + name);
    EXPECT_FALSE(spec.vectors.empty()) << name;
    EXPECT_FALSE(spec.spinors.empty()) << name;
  }
}
