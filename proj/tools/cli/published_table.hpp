#pragma once

#include <string_view>
#include <vector>

namespace fracstep::cli {

/// One row of the published comparison (alpha = 2, nu = 1, t = 1).
struct PublishedRow {
    double x = 0.0;
    double v = 0.0; // numerical solution
    double u = 0.0; // separation-of-variables solution
    double e = 0.0; // v - u as printed
};

/// The fixture text exactly as published, with decimal commas.
extern const std::string_view kPublishedFixture;

/// Parses the fixture, converting decimal commas to points.
std::vector<PublishedRow> published_rows();

} // namespace fracstep::cli
