"""Reference zeros of f (first 45), as tabulated to 15 significant digits."""

KNOWN_ZEROS = (
    "7.67705050991057", "8.93841793140833", "13.9549229413771",
    "15.5679745247884", "20.2405336746206", "22.0185470304095",
    "26.5267465905312", "28.4064753351502", "32.8127796622118",
    "34.7636137360244", "39.0985258618221", "41.1028595266668",
    "45.3839993880412", "47.4305876227269", "51.6692361998946",
    "53.7503680917393", "57.9542719238923", "60.0643806701981",
    "64.2391371546902", "66.3740436665322", "70.5238571367734",
    "72.6803262355070", "76.8084524955294", "78.9839168600548",
    "83.0929401032590", "85.2853203526836", "89.3773338407949",
    "91.5849167023848", "95.6616452128959", "97.8829983472283",
    "101.945883830959", "104.179794651601", "108.230057788273",
    "110.475488483408", "114.514173951783", "116.770227743121",
    "120.798238189933", "123.064133569705", "127.082255551763",
    "129.357306301363", "133.366230408727", "135.649829884233",
    "139.650166567860", "141.941775186108", "145.934067362779",
)
