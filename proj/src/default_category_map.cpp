#include "phonoscope/alignment.hpp"

namespace phonoscope {

namespace {
const char kDefaultCategoryMapTsv[] =
#include "default_category_map_data.inc"
    ;
}  // namespace

std::string_view default_category_map_tsv() { return kDefaultCategoryMapTsv; }

}  // namespace phonoscope
