# empty