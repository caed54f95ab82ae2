#include <doctest.h>

#include <sstream>

#include "tubelab/configurations.hpp"
#include "tubelab/serialize.hpp"
#include "tubelab/tube_family.hpp"

using namespace tubelab;

TEST_CASE("atom text round-trip is exact") {
    const auto atoms = gen_uniform_random(100, 1.0 / 128, Dimension(3), 5);
    std::stringstream ss;
    write_atoms(ss, atoms, Dimension(3), 1.0 / 128);
    const auto back = read_atoms(ss);
    REQUIRE(back.size() == atoms.size());
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        CHECK(back[i].center == atoms[i].center);  // 17 digits: bit-exact
        CHECK(back[i].diameter == atoms[i].diameter);
        CHECK(back[i].weight == atoms[i].weight);
    }
}

TEST_CASE("tube text round-trip is exact") {
    const auto fam = standard_family(Dimension(2), 1.0 / 16);
    std::stringstream ss;
    write_tubes(ss, fam.tubes, Dimension(2), 1.0 / 16, fam.offset_spacing);
    const auto back = read_tubes(ss);
    REQUIRE(back.size() == fam.tubes.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        CHECK(back[i].direction.vec() == fam.tubes[i].direction.vec());
        CHECK(back[i].anchor == fam.tubes[i].anchor);
        CHECK(back[i].width == fam.tubes[i].width);
    }
}

TEST_CASE("malformed inputs are rejected") {
    std::stringstream bad_header("x y z");
    CHECK_THROWS(read_atoms(bad_header));
    std::stringstream truncated("2 0.125 3\n0.5 0.5 1\n");
    CHECK_THROWS(read_atoms(truncated));
    std::stringstream bad_dim("7 0.125 0");
    CHECK_THROWS(read_atoms(bad_dim));
    std::stringstream bad_tubes("2 0.125 0.25 1\n1 0 0.5\n");
    CHECK_THROWS(read_tubes(bad_tubes));
}

TEST_CASE("profile csv is descending in k") {
    RichnessProfile profile(std::vector<std::int64_t>{0, 1, 3, 3, 2});
    std::stringstream ss;
    write_profile_csv(ss, profile);
    std::string line;
    std::getline(ss, line);
    CHECK(line == "k,count");
    std::getline(ss, line);
    CHECK(line == "3,2");
    std::getline(ss, line);
    CHECK(line == "2,3");
    std::getline(ss, line);
    CHECK(line == "1,4");
}

TEST_CASE("tubechen and bound report csv shapes") {
    std::vector<Tubechen> tcs{{3, 7, 2, 5}};
    std::stringstream ss;
    write_tubechens_csv(ss, tcs);
    CHECK(ss.str() == "tube_id,cell_id,w,m\n3,7,2,5\n");

    std::vector<BoundReport> reports(1);
    reports[0].claim = "corner";
    reports[0].d = 2;
    reports[0].delta = 0.125;
    reports[0].k = 8;
    reports[0].measured = 10;
    reports[0].formula = 8;
    reports[0].constant = 1.25;
    reports[0].pass = true;
    std::stringstream bs;
    write_bound_reports_csv(bs, reports);
    std::string header;
    std::getline(bs, header);
    CHECK(header == "claim,d,delta,W,k,S,D,seed,measured,formula,constant,pass");
    std::string row;
    std::getline(bs, row);
    CHECK(row.find("corner,2,0.125") == 0);
    CHECK(row.back() == '1');
}
