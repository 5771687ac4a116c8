#include "cli/published_table.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <string>

namespace fracstep::cli {

// x | v | u | E, transcribed with the published decimal commas. The last E
// cell is inconsistent with its own v and u columns (v = u = 0).
const std::string_view kPublishedFixture = R"(
0,0 | 0,00000000 | 0,00000000 |  0,00000000
0,5 | 0,13650936 | 0,14492708 | -0,00841772
1,0 | 0,28017859 | 0,28987258 | -0,00969399
1,5 | 0,41875250 | 0,41990747 | -0,00115497
2,0 | 0,52474526 | 0,51329497 |  0,01145029
2,5 | 0,56558688 | 0,54801760 |  0,01756928
3,0 | 0,52629428 | 0,51462415 |  0,01167013
3,5 | 0,42130602 | 0,42221621 |  0,00208981
4,0 | 0,28306465 | 0,29267907 | -0,00961442
4,5 | 0,13934058 | 0,14787562 | -0,00853504
5,0 | 0,00000000 | 0,00000000 |  0,00273680
)";

std::vector<PublishedRow> published_rows() {
    auto number = [](std::string cell) {
        std::replace(cell.begin(), cell.end(), ',', '.');
        cell.erase(std::remove(cell.begin(), cell.end(), ' '), cell.end());
        char* end = nullptr;
        const double v = std::strtod(cell.c_str(), &end);
        if (cell.empty() || end != cell.c_str() + cell.size()) {
            throw std::runtime_error("bad Table 1 fixture cell '" + cell + "'");
        }
        return v;
    };

    std::vector<PublishedRow> rows;
    std::istringstream in{std::string(kPublishedFixture)};
    std::string line;
    while (std::getline(in, line)) {
        if (line.find('|') == std::string::npos) continue;
        std::istringstream cells(line);
        std::string c[4];
        for (auto& s : c) std::getline(cells, s, '|');
        rows.push_back({number(c[0]), number(c[1]), number(c[2]), number(c[3])});
    }
    return rows;
}

} // namespace fracstep::cli
