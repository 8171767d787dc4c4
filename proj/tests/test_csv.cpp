#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "qheat/csv.hpp"

using namespace qheat;

TEST(Csv, NumberFormat) {
    EXPECT_EQ(csv_number(0.01484), "1.48400000000e-02");
    EXPECT_EQ(csv_number(-0.0), "0.00000000000e+00");
    EXPECT_EQ(csv_number(-2.5e10), "-2.50000000000e+10");
}

TEST(Csv, WritesHeaderRowsAndNotes) {
    CsvTable t({"omega[V]", "J[V^2]", "method"});
    t.row() << 1.0 << -0.5 << "direct";
    t.note("sum_rule 11 ok");
    std::ostringstream out;
    t.write(out);
    EXPECT_EQ(out.str(), "omega[V],J[V^2],method\n1.00000000000e+00,-5.00000000000e-01,direct\n# sum_rule 11 ok\n");
}

TEST(Csv, RejectsRaggedRowsAndSeparators) {
    CsvTable t({"a[1]", "b[1]"});
    t.row() << 1.0;
    std::ostringstream out;
    EXPECT_THROW(t.write(out), std::logic_error);
    CsvTable u({"a[1]"});
    EXPECT_THROW(u.row() << "x,y", std::invalid_argument);
    EXPECT_THROW(CsvTable({}), std::invalid_argument);
}

TEST(Csv, OutputIsDeterministic) {
    auto make = [] {
        CsvTable t({"x[1]"});
        for (int i = 0; i < 100; ++i) t.row() << std::sin(0.1 * i);
        std::ostringstream o;
        t.write(o);
        return o.str();
    };
    EXPECT_EQ(make(), make());
}
