package checkdigit

// dammMatrix is the quasigroup table driving the Damm algorithm; its zero
// diagonal makes the final interim digit the check digit itself.
var dammMatrix = [10][10]int{
	{0, 3, 1, 7, 5, 9, 8, 6, 4, 2},
	{7, 0, 9, 2, 1, 5, 4, 8, 6, 3},
	{4, 2, 0, 6, 8, 7, 1, 3, 5, 9},
	{1, 7, 5, 0, 9, 8, 3, 4, 2, 6},
	{6, 1, 2, 3, 0, 4, 5, 9, 7, 8},
	{3, 6, 7, 4, 2, 0, 9, 5, 8, 1},
	{5, 8, 6, 9, 7, 2, 0, 1, 3, 4},
	{8, 9, 4, 5, 3, 6, 2, 0, 1, 7},
	{9, 4, 3, 8, 6, 1, 7, 2, 0, 5},
	{2, 5, 8, 1, 4, 3, 6, 7, 9, 0},
}

type damm struct{}

// NewDamm returns a Provider implementing the Damm algorithm.
func NewDamm() Provider { return damm{} }

func (d damm) Verify(code string) bool {
	if !isNumber(code) {
		return false
	}
	interim := 0
	for _, r := range code {
		interim = dammMatrix[interim][int(r-'0')]
	}
	return interim == 0
}

func (d damm) Generate(seed string) (int, error) {
	if seed == "" {
		return 0, ErrInvalidArgument
	}
	interim := 0
	for _, r := range seed {
		interim = dammMatrix[interim][int(r-'0')]
	}
	return interim, nil
}
